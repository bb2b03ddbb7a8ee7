#include "coast/policy/prompts.hpp"

#include <stdexcept>

#include "coast/util/json.hpp"

namespace coast::policy {
namespace {

constexpr std::string_view kBasic = R"([Instruction]
You're a game agent solving an adventure game. Adventure games can involve variables and often require lateral thinking and creative problem-solving. Rather than focusing solely on the ultimate goal, try to solve problems using common sense and imaginative thinking.

[Important Notice]
To ensure a smooth experience and prevent unexpected issues, please read and follow the instructions below carefully:
- Do not repeatedly interact with objects that may not be clickable. Even if nothing happens, your action might have already been registered-or the object may simply not be interactive.
- Avoid repeating the same action excessively. A lack of visible response or an unexpected result does not mean the action failed.
- Do not click the setup or question buttons in the top-left corner of the screen.
- Do not leave the game screen.
- Do not access Settings or Help:
  - Do not click the wrench icon (Settings).
  - Do not click the question mark icon (Help or Hints).

[Prompt]
You are now the lead agent in "{title}" - a point-and-click game. Everything in this game is controlled with simple mouse clicks. {description}

[Basic Rules]
- Observe carefully. Don't rush or search randomly - every detail could matter. What seems ordinary might hide secrets.
- Think logically and laterally. Don't brute-force or guess wildly. Follow the trail of clues using reason, insight, and creativity.
- Investigate step by step. Whether solving a mystery or unlocking a puzzle, progress comes from careful observation and deduction.
- Trust your instincts. Sometimes the answer is hidden in plain sight - don't overlook the obvious.

[Information]
{information}

[Completion Condition]
{completion}

[Completion Signal]
Once you've solved the case, type the following to signal completion:
[Done]
)";

constexpr std::string_view kSeeker = R"({basic_prompt}
[Action Prompt]
Your job is to extract all clues visible on the screen and summarize what you observe.

[Expected Behavior]
Return the following:
- A list of clues found. Each clue should include:
  - clue: short name or label for the clue
  - description: what the clue seems to represent or imply
  - location: where the clue was found - include both the specific spot and a short description of the surrounding environment
  - type: categorize the clue using one of the following:
    - item: Tools or objects the player can collect or interact with
    - note: Written information such as signs, notes, or documents
    - code: Visible numbers, passcodes, symbols, or puzzle sequences
    - visual cue: Visual cues like arrows, lighting, gaze direction, or environmental emphasis
    - status: UI state indicators
    - conversation: Any meaningful dialogue or internal monologue text shown on screen
  - interactable: true if the player can interact with this clue, false otherwise
  - usage_hint: how this clue might be used or why it is important
- A short summary of the current observation-action pair (episodic memory).
  Each memory should include:
  - action: what you did and what was observed as a result
  - place: what the current area/room looks like, its notable features

[Result Format]
Respond in this exact JSON format, wrapped in <RESPO> tags, like this:

<RESPO>
{
  "clues": [
    {
      "clue": "<Short name or label for the clue>",
      "description": "<What the clue seems to represent or imply>",
      "location": "<Specific spot + surrounding context>",
      "type": "<item | note | code | visual cue | status | conversation>",
      "interactable": <true | false>,
      "usage_hint": "<How this clue might be used or why it could be important>"
    }
  ],
  "episodic_memory": [
    {
      "action": "<What the player did and what was observed as a result>",
      "place": "<Description of the room or environment where the action occurred>"
    }
  ],
  "proposed_action": <next action>
}
</RESPO>

If your response does not strictly follow this format, it will be discarded.
Do not store the same clue more than once in memory.

[Clues]
{clues}
{context})";

constexpr std::string_view kMapper = R"({basic_prompt}
[Action Prompt]
You are a reasoning agent matching current clues with episodic memory from past gameplay.
Your goal is to find meaningful --- and possibly non-obvious --- connections between clues and past events using:
- abductive reasoning: inferring the most plausible explanation from incomplete or ambiguous information
- lateral thinking: creative, indirect associations beyond surface similarity

For each clue:
- Identify an episodic memory where the clue could plausibly have helped --- even if the connection is indirect or interpretive.
- Determine the concrete action the player should now take based on that match.

[Expected behavior]
- Use each clue's description, type, and usage_hint to inform your reasoning.
- Go beyond surface-level similarity --- prioritize plausible, creative mappings.
- Favor abductive reasoning --- what might this clue explain or reveal?
- Explore lateral connections --- metaphorical, thematic, or functional.
- Only match when a memory clearly presents a situation where the clue could have been helpful.
- Be specific and grounded. If uncertain, omit the match.
- Return up to 5 of the most insightfully plausible matches --- quality over quantity.
- If no valid matches are found, return:

<RESPO>[Nobody]</RESPO>

Do not fabricate connections.

[Result Format]
Respond in JSON format like this:
<RESPO>
[
  {
    "clue": {
      "name": "<short clue name>",
      "description": "<what the clue seems to represent or imply>",
      "location": "<specific spot + environment context>",
      "type": "<item | note | code | visual cue | status | conversation>",
      "interactable": <true | false>,
      "usage_hint": "<how this clue might be used or why it could be important>"
    },
    "related_memory": "<a specific past observation where this clue would have been useful>",
    "expected_action": "<concrete action the player should now take using this clue>"
  }
]
</RESPO>
If the format is not strictly followed, the response will be discarded.

[Clues]
{clues}

[Episodic Memory]
{episodic_memory}

Do not generate mapping memory that has already succeeded.

[Success Memory]
{success_memory}
{context})";

constexpr std::string_view kSolver = R"({basic_prompt}
[Action Prompt]
You are now trying to solve games using previously discovered clues and their related observations.
Each clue is paired with a related episodic memory from your past exploration.
Use this information to decide on the most logical and effective next action to progress in the game.

Each episodic memory is structured as:
- action: what you did and what you observed
- place: description of the environment or scene

[Expected behavior]
- Choose a clear goal based on the clue-to-memory mapping you are given.
- Take a meaningful action in the game to pursue that goal.
- Summarize what happened after the action.
- Return the result in the format below:
  - episodic_memory: what happened during this step (at least one item)
  - mapping_result (optional), if your action clearly relates to a clue, include:
    - goal: what problem you were trying to solve
    - reasoning: why that clue and memory were relevant to the goal
    - result: one of "Success" or "Fail" depending on whether your action clearly used the clue to solve a problem

[Result Format]
Respond in JSON format like this:
<RESPO>
{
  "episodic_memory": [
    {
      "action": "<What the player did and what was observed as a result>",
      "place": "<Description of the room or area where it happened>"
    }
  ],
  "mapping_result": [
    {
      "clue": "<Clue name used in this action>",
      "related_memory": "<The relevant episodic memory entry this clue connects to>",
      "goal": "<What the player was trying to achieve by using the clue>",
      "reasoning": "<Why this clue and memory logically support that goal>"
    }
  ],
  "result": "<Success | Fail>",
  "proposed_action": <next action>
}
</RESPO>
If your response does not strictly follow the format, it will be discarded.

[Important about Success]
An action is only considered a "Success" if the clue was effectively used to solve a specific puzzle or problem --- for example, using a pattern from books on a shelf to open a secret compartment based on a past observation.
Simply interacting with objects is not enough.

To qualify as a true Success, the outcome must include a meaningful in-game change, such as:
- Obtaining an item
- Unlocking a new area
- Updating a stat
- Triggering story progression

[Action Process]
- Select a goal based on the mapping between clue and memory. Explain why this goal is relevant.
- Act accordingly in the game world.
- At the final turn, assess the outcome.
- If the clue helped solve a problem, it's a "Success"; otherwise, it's a "Fail".
- When selecting a goal, be sure to reference the clue's metadata:
  - type: the kind of clue (e.g., item, code, note, etc.)
  - interactable: whether the player can use it
  - usage_hint: what the clue suggests it might be useful for

[Mapping History]
{mapping_history}
{context})";

constexpr std::string_view kBaselineTail = R"(
Respond with your next action wrapped in <RESPO> tags:
<RESPO>{"proposed_action": <next action>, "reasoning": "<optional>"}</RESPO>
or <RESPO>[Done]</RESPO> once the game is complete.
{context})";

constexpr std::string_view kActionFormat = R"(
[Action Format]
<next action> is one JSON object, one of:
{"type": "left_click" | "right_click" | "middle_click" | "double_click" | "triple_click", "x": int, "y": int}
{"type": "drag", "x1": int, "y1": int, "x2": int, "y2": int}
{"type": "scroll", "direction": "up" | "down" | "left" | "right", "amount": int}
{"type": "key_press", "key": string}
{"type": "type_text", "text": string}
{"type": "hold_key", "key": string, "duration": seconds}
{"type": "finish"}
)";

void replace_all(std::string& text, std::string_view key, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
        text.replace(pos, key.size(), value);
        pos += value.size();
    }
}

std::string bullet_list(const std::vector<std::string>& lines, std::string_view empty) {
    if (lines.empty()) return std::string(empty);
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    out.pop_back();
    return out;
}

std::string clues_block(const PolicyContext& ctx) {
    if (!ctx.memory || ctx.memory->empty()) return "(none yet)";
    std::string out;
    for (const auto& c : ctx.memory->clues()) out += util::canonical_dump(memory::to_json(c)) + "\n";
    out.pop_back();
    return out;
}

std::string episodes_block(const PolicyContext& ctx) {
    if (!ctx.memory || ctx.memory->episodes().empty()) return "(none yet)";
    std::string out;
    for (const auto& e : ctx.memory->episodes()) {
        out += "step " + std::to_string(e.step_index) + ": " + e.action_summary + " | " + e.place + "\n";
    }
    out.pop_back();
    return out;
}

std::string mapping_block(const PolicyContext& ctx) {
    std::vector<memory::GoalCandidate> goals = ctx.mapping;
    if (goals.empty() && ctx.goal) goals.push_back(*ctx.goal);
    if (goals.empty()) return clues_block(ctx);
    std::string out;
    for (const auto& g : goals) {
        out += "Clue: " + g.clue.name + "\nRelated Memory: " + g.related_memory +
               "\nExpected Action: " + g.expected_action + "\n";
    }
    if (ctx.goal) out += "Current Goal: " + ctx.goal->clue.name + ": " + ctx.goal->expected_action + "\n";
    out.pop_back();
    return out;
}

std::string context_block(const PolicyContext& ctx) {
    std::string out(kActionFormat);
    out += "\n[Task]\n" + ctx.task_query + "\n";
    if (ctx.observation) out += "\n[Observation]\n" + util::canonical_dump(env::to_json(*ctx.observation)) + "\n";
    if (!ctx.recent.empty()) out += "\n[Recent Steps]\n" + bullet_list(ctx.recent, "") + "\n";
    if (!ctx.summary.empty()) out += "\n[Summary]\n" + ctx.summary + "\n";
    if (!ctx.hints.empty()) out += "\n[Hints]\n" + bullet_list(ctx.hints, "") + "\n";
    return out;
}

std::string basic_prompt(const PolicyContext& ctx) {
    std::string out(kBasic);
    const GameBrief empty;
    const GameBrief& b = ctx.brief ? *ctx.brief : empty;
    replace_all(out, "{title}", b.title);
    replace_all(out, "{description}", b.description);
    replace_all(out, "{information}", bullet_list(b.info, "(none)"));
    replace_all(out, "{completion}", b.completion);
    return out;
}

}  // namespace

std::string_view prompt_template_id(Role role) {
    switch (role) {
        case Role::seek: return "seeker";
        case Role::map: return "mapper";
        case Role::solve: return "solver";
        case Role::baseline: return "basic";
    }
    return "basic";
}

std::string_view prompt_template(std::string_view id) {
    if (id == "basic") return kBasic;
    if (id == "seeker") return kSeeker;
    if (id == "mapper") return kMapper;
    if (id == "solver") return kSolver;
    throw std::out_of_range("unknown prompt template '" + std::string(id) + "'");
}

std::string render_prompt(Role role, const PolicyContext& ctx) {
    std::string out;
    if (role == Role::baseline) {
        out = basic_prompt(ctx) + std::string(kBaselineTail);
    } else {
        out = std::string(prompt_template(prompt_template_id(role)));
        replace_all(out, "{basic_prompt}", basic_prompt(ctx));
    }
    // Context last: observation text may itself contain braces.
    replace_all(out, "{clues}", clues_block(ctx));
    replace_all(out, "{episodic_memory}", episodes_block(ctx));
    replace_all(out, "{success_memory}", bullet_list(ctx.resolved, "(none)"));
    replace_all(out, "{mapping_history}", mapping_block(ctx));
    replace_all(out, "{context}", context_block(ctx));
    return out;
}

}  // namespace coast::policy
