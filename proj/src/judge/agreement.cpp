#include <algorithm>
#include <cmath>
#include <numeric>

#include "coast/judge/judge.hpp"
#include "coast/util/csv.hpp"
#include "coast/util/text.hpp"

namespace coast::judge {
namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw LengthMismatch("paired lists differ in length (" + std::to_string(x.size()) + " vs " +
                             std::to_string(y.size()) + ")");
    }
    if (x.empty()) throw LengthMismatch("paired lists are empty");
}

double parse_number(const std::string& text, std::size_t row, const char* column) {
    const auto t = util::trim(text);
    try {
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used == t.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw SchemaError("csv row " + std::to_string(row) + ": column '" + column + "' is not a number: '" + t + "'");
}

}  // namespace

Json to_json(const AgreementStats& s) {
    Json j{{"samples", s.samples}, {"matches", s.matches}, {"accuracy", s.accuracy}};
    j["spearman"] = s.spearman ? Json(*s.spearman) : Json(nullptr);
    j["pearson"] = s.pearson ? Json(*s.pearson) : Json(nullptr);
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateVariance("correlation undefined: a list has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

AgreementStats judge_agreement(std::span<const double> judged, std::span<const double> human) {
    check_pair(judged, human);
    AgreementStats s;
    s.samples = judged.size();
    for (std::size_t i = 0; i < judged.size(); ++i) s.matches += judged[i] == human[i];
    s.accuracy = static_cast<double>(s.matches) / static_cast<double>(s.samples);
    try {
        s.pearson = pearson(judged, human);
        s.spearman = spearman(judged, human);
    } catch (const DegenerateVariance& e) {
        s.pearson.reset();
        s.spearman.reset();
        s.note = e.what();
    }
    return s;
}

AgreementStats agreement_from_csv(const std::string& text) {
    const auto rows = util::parse_csv(text);
    if (rows.empty()) throw SchemaError("agreement csv is empty");
    std::vector<std::string> header;
    for (const auto& h : rows[0]) header.push_back(util::normalize_key(h));
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };
    auto cell = [&](std::size_t r, std::size_t c) -> const std::string& {
        if (c >= rows[r].size()) throw SchemaError("csv row " + std::to_string(r) + " is missing columns");
        return rows[r][c];
    };

    if (auto jc = column("judged_level"), hc = column("human_level"); jc && hc) {
        std::vector<double> judged, human;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            judged.push_back(parse_number(cell(r, *jc), r, "judged_level"));
            human.push_back(parse_number(cell(r, *hc), r, "human_level"));
        }
        return judge_agreement(judged, human);
    }
    if (auto cc = column("correct"), tc = column("total"); cc && tc) {
        AgreementStats s;
        double correct = 0.0, total = 0.0;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const double c = parse_number(cell(r, *cc), r, "correct");
            const double t = parse_number(cell(r, *tc), r, "total");
            if (c < 0 || t <= 0 || c > t || c != std::floor(c) || t != std::floor(t)) {
                throw SchemaError("csv row " + std::to_string(r) + ": need 0 <= correct <= total, integers");
            }
            correct += c;
            total += t;
        }
        if (total == 0) throw LengthMismatch("no samples in agreement csv");
        s.samples = static_cast<std::size_t>(total);
        s.matches = static_cast<std::size_t>(correct);
        s.accuracy = correct / total;
        s.note = "count rows carry no levels; correlations need per-sample rows";
        return s;
    }
    throw SchemaError("agreement csv needs columns (judged_level, human_level) or (correct, total)");
}

}  // namespace coast::judge
