#include "coast/sim/generator.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>

#include "coast/metrics/metrics.hpp"
#include "coast/sim/oracle.hpp"

namespace coast::sim {
namespace {

constexpr std::array<std::string_view, 8> kRooms{"Hallway", "Library", "Study",   "Workshop",
                                                 "Attic",   "Cellar",  "Gallery", "Parlour"};
constexpr std::array<std::string_view, 8> kItems{"brass key",   "silver coin", "iron gear",   "glass lens",
                                                 "copper wire", "wax seal",    "bone whistle", "jade token"};
constexpr std::array<std::string_view, 6> kDecoys{"torn poster", "dusty ledger", "faded map",
                                                  "old calendar", "cracked mirror", "shipping label"};

constexpr int kCols = 6;
constexpr int kRows = 4;
constexpr int kCellW = 126;
constexpr int kCellH = 118;
constexpr int kMaxWinch = 20000;

std::string numbered(std::string_view base, int i, std::size_t pool) {
    std::string s(base);
    if (static_cast<std::size_t>(i) >= pool) s += " " + std::to_string(i / pool + 1);
    return s;
}

Json rect(int cell) {
    const int col = cell % kCols, row = cell / kCols;
    return Json::array({16 + col * kCellW + 8, 40 + row * kCellH + 8, kCellW - 16, kCellH - 20});
}

struct Builder {
    const GeneratorParams& p;
    std::mt19937_64 rng;
    std::vector<std::vector<int>> free_cells;  // per scene
    std::vector<Json> scene_elements;

    explicit Builder(const GeneratorParams& params) : p(params), rng(params.seed) {
        for (int s = 0; s < p.n_scenes; ++s) {
            std::vector<int> cells(kCols * kRows);
            for (int i = 0; i < kCols * kRows; ++i) cells[i] = i;
            for (int i = static_cast<int>(cells.size()) - 1; i > 0; --i) std::swap(cells[i], cells[pick(i + 1)]);
            free_cells.push_back(std::move(cells));
        }
        scene_elements.assign(p.n_scenes, Json::array());
    }

    int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

    // Places an element in `scene`, or the next scene with room.
    int place(int scene, Json element) {
        for (int k = 0; k < p.n_scenes; ++k) {
            const int s = (scene + k) % p.n_scenes;
            if (free_cells[s].empty()) continue;
            element["rect"] = rect(free_cells[s].back());
            free_cells[s].pop_back();
            scene_elements[s].push_back(std::move(element));
            return s;
        }
        throw GenerationBudgetExceeded("no room left for element " + element.value("id", std::string()));
    }

    std::string scene_id(int s) const { return "room_" + std::to_string(s); }
};

Json build(const GeneratorParams& p, int winch) {
    Builder b(p);
    const int S = p.n_scenes, L = p.chain_length;
    const bool sim = p.genre == Genre::simulation;
    std::string code;
    for (int i = 0; i < 4; ++i) code += static_cast<char>('0' + b.pick(10));

    Json flags = Json::array({{{"id", "vault_open"}, {"lock", true}}});
    Json items = Json::array();
    Json counters = Json::array();
    Json rules = Json::array();
    Json clues = Json::array();
    Json milestones = Json::array();
    Json hints = Json::array();
    Json overlay = Json::array();

    // Doors: a straight corridor of rooms.
    for (int s = 0; s + 1 < S; ++s) {
        const auto fwd = "door_" + std::to_string(s) + "_fwd", back = "door_" + std::to_string(s + 1) + "_back";
        b.place(s, {{"id", fwd}, {"label", "Door to the " + numbered(kRooms[(s + 1) % kRooms.size()], s + 1, kRooms.size())}, {"kind", "door"}});
        b.place(s + 1, {{"id", back}, {"label", "Door back"}, {"kind", "door"}});
        rules.push_back({{"id", "go_" + std::to_string(s) + "_fwd"}, {"on", {{"element", fwd}}}, {"effects", {{"goto", b.scene_id(s + 1)}}}});
        rules.push_back({{"id", "go_" + std::to_string(s + 1) + "_back"}, {"on", {{"element", back}}}, {"effects", {{"goto", b.scene_id(s)}}}});
    }

    const std::string mode = p.genre == Genre::mystery ? "sequential" : "counting";
    if (sim) {
        counters.push_back({{"id", "progress"}, {"label", "Progress"}, {"max", L}});
    }

    // Head clue: the code note in the first room.
    b.place(0, {{"id", "note_code"}, {"label", "Scribbled note"}, {"kind", "note"}, {"text", "The vault code is " + code + "."}});
    clues.push_back({{"element", "note_code"},
                     {"name", "vault code note"},
                     {"description", "A note with a four-digit code: " + code + "."},
                     {"type", "code"},
                     {"usage_hint", "Probably opens a keypad somewhere."},
                     {"subtask", "Enter " + code + " on the vault keypad"},
                     {"used_by", Json::array({"open_vault"})}});

    // Chain items: each only comes loose once the previous one is held.
    std::vector<std::string> item_ids;
    for (int k = 1; k < L; ++k) {
        const auto id = "chain_" + std::to_string(k);
        const auto label = numbered(kItems[(k - 1) % kItems.size()], k - 1, kItems.size());
        item_ids.push_back(id);
        items.push_back({{"id", id}, {"label", label}});
        const int scene = b.place(b.pick(S), {{"id", "el_" + id}, {"label", label}, {"kind", "object"},
                                              {"visible_when", {{"not", {{"has", id}}}}}});
        Json rule{{"id", "take_" + id}, {"on", {{"element", "el_" + id}}}, {"effects", {{"grant", Json::array({id})}}}};
        if (k > 1) rule["when"] = {{"has", item_ids[k - 2]}};
        if (sim) rule["effects"]["counters"] = {{"progress", 1}};
        rules.push_back(rule);
        clues.push_back({{"element", "el_" + id},
                         {"name", label},
                         {"description", "A " + label + " that looks important."},
                         {"type", "item"},
                         {"usage_hint", k > 1 ? "Stuck fast until something else is found." : "Worth picking up."},
                         {"subtask", "Pick up the " + label},
                         {"used_by", Json::array({"take_" + id})}});
        hints.push_back("Take the " + label + " in the " + numbered(kRooms[scene % kRooms.size()], scene, kRooms.size()) + ".");
        if (!sim) {
            milestones.push_back({{"id", "got_" + id}, {"label", label + " taken"}, {"kind", mode},
                                  {"predicate", {{"has", id}}}, {"evidence", {{"inventory", label}}}});
        }
    }

    // Decoys carry clue metadata but nothing uses them.
    for (int d = 0; d < p.n_clues - L; ++d) {
        const auto id = "decoy_" + std::to_string(d);
        const auto label = numbered(kDecoys[d % kDecoys.size()], d, kDecoys.size());
        b.place(b.pick(S), {{"id", id}, {"label", label}, {"kind", "note"}});
        clues.push_back({{"element", id},
                         {"name", label},
                         {"description", "A " + label + "; nothing on it stands out."},
                         {"type", d % 2 ? "visual cue" : "note"},
                         {"usage_hint", "Probably scenery."},
                         {"subtask", ""},
                         {"used_by", Json::array()}});
    }

    // The vault: keypad plus an optional winch in the last room.
    const int last = S - 1;
    b.place(last, {{"id", "keypad"}, {"label", "Vault keypad"}, {"kind", "input"}});
    Json when = Json::array({{{"not", {{"flag", "vault_open"}}}}});
    for (const auto& id : item_ids) when.push_back({{"has", id}});
    if (winch > 0) {
        counters.push_back({{"id", "tension"}, {"label", "Winch tension"}, {"max", winch}, {"hud_when", false}});
        b.place(last, {{"id", "winch"}, {"label", "Vault winch"}, {"kind", "object"}});
        rules.push_back({{"id", "turn_winch"}, {"on", {{"element", "winch"}}}, {"effects", {{"counters", {{"tension", 1}}}}}});
        when.push_back({{"counter", "tension"}, {"op", ">="}, {"value", winch}});
        hints.push_back("Turn the vault winch " + std::to_string(winch) + " times.");
    }
    Json open_fx{{"set", {{"vault_open", true}}}, {"dialogue", "The vault door swings open."}};
    if (sim) open_fx["counters"] = {{"progress", 1}};
    rules.push_back({{"id", "open_vault"},
                     {"on", {{"action", "type_text"}, {"element", "keypad"}, {"text", code}}},
                     {"when", {{"all", when}}},
                     {"effects", open_fx}});
    hints.push_back("Click the keypad in the last room and type " + code + ".");
    overlay.push_back({{"id", "vault_mark"}, {"label", "Vault open"}, {"kind", "status"}, {"rect", Json::array({600, 4, 190, 30})},
                       {"visible_when", {{"flag", "vault_open"}}}});

    if (sim) {
        milestones.push_back({{"id", "progress"}, {"label", "Chain progress"}, {"kind", "continuous"},
                              {"counters", Json::array({{{"counter", "progress"}, {"normalizer", L}, {"source", "max_attainable"}}})}});
    } else {
        milestones.push_back({{"id", "vault_opened"}, {"label", "Vault opened"}, {"kind", mode},
                              {"predicate", {{"flag", "vault_open"}}}, {"evidence", {{"visible", "vault_mark"}}}});
    }

    Json scenes = Json::array();
    for (int s = 0; s < S; ++s) {
        scenes.push_back({{"id", b.scene_id(s)}, {"label", numbered(kRooms[s % kRooms.size()], s, kRooms.size())},
                          {"elements", b.scene_elements[s]}});
    }

    const std::string genre(to_string(p.genre));
    Json doc{{"spec_version", 1},
             {"game_id", "gen_" + genre + "_" + std::to_string(p.seed)},
             {"title", "Generated vault " + std::to_string(p.seed)},
             {"description", "A chain of " + std::to_string(L) + " clues across " + std::to_string(S) + " rooms ends at a vault."},
             {"genre_tag", genre},
             {"judge_strategy", sim ? "continuous" : mode},
             {"step_budget", 1000},
             {"task_query", "Open the vault."},
             {"info", Json::array({"Somewhere in these rooms is the vault code."})},
             {"completion", "The game is complete when the vault door opens."},
             {"start_scene", b.scene_id(0)},
             {"flags", flags},
             {"counters", counters},
             {"items", items},
             {"overlay", overlay},
             {"scenes", scenes},
             {"rules", rules},
             {"clues", clues},
             {"milestones", milestones},
             {"success_condition", {{"flag", "vault_open"}}},
             {"hints", hints}};
    return doc;
}

}  // namespace

int measure_head_gap(const SpecPtr& spec, const std::string& head_clue) {
    auto state = init(spec);
    auto events = initial_clue_events(state);
    const auto plan = oracle_solve(spec);
    for (const auto& step : plan.steps) {
        auto out = step_in_place(state, concretize(step, state), false);
        events.insert(events.end(), out.events.begin(), out.events.end());
    }
    const auto gaps = metrics::obs_behavior_gaps(events);
    for (const auto& r : gaps.records) {
        if (r.clue == head_clue) return r.gap;
    }
    throw GenerationBudgetExceeded("head clue '" + head_clue + "' is never used by the oracle plan");
}

GeneratedGame generate(const GeneratorParams& p) {
    if (p.n_scenes < 1 || p.n_clues < 1 || p.chain_length < 1 || p.max_attempts < 1) {
        throw std::invalid_argument("scenes, clues, chain length and attempts must be positive");
    }
    if (p.target_gap_lower_bound < 0) throw std::invalid_argument("gap bound must be non-negative");
    if (p.chain_length > p.n_clues) throw std::invalid_argument("chain length cannot exceed the clue count");

    int winch = 0;
    for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
        GeneratedGame g;
        g.document = build(p, winch);
        g.head_clue = "vault code note";
        try {
            g.spec = load_spec(g.document, LoadOptions{true, 1'000'000});
            const auto plan = oracle_solve(g.spec);
            g.plan_length = static_cast<int>(plan.steps.size());
            g.head_gap = measure_head_gap(g.spec, g.head_clue);
        } catch (const StateSpaceBudgetExceeded& e) {
            throw GenerationBudgetExceeded(std::string("oracle budget: ") + e.what());
        }
        if (g.head_gap >= p.target_gap_lower_bound) {
            // Budget with headroom over the certified plan.
            g.document["step_budget"] = std::max(60, 2 * g.plan_length);
            g.spec = load_spec(g.document, LoadOptions{true, 1'000'000});
            return g;
        }
        winch += p.target_gap_lower_bound - g.head_gap;
        if (winch > kMaxWinch) break;
    }
    throw GenerationBudgetExceeded("could not reach a head-clue gap of " + std::to_string(p.target_gap_lower_bound) +
                                   " within " + std::to_string(p.max_attempts) + " attempts");
}

}  // namespace coast::sim
