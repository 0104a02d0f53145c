#include <car/io.hpp>

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

namespace car {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// One tokenized physical line.
struct Line {
    int number;
    std::vector<std::string> tokens; // subsets kept as one token "{1,2}"
};

std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;

        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            if (std::isspace(static_cast<unsigned char>(raw[i]))) {
                ++i;
                continue;
            }
            if (raw[i] == '{') {
                auto close = raw.find('}', i);
                if (close == std::string::npos) throw ParseError(number, "unterminated '{'");
                std::string tok = raw.substr(i, close - i + 1);
                tok.erase(std::remove_if(tok.begin(), tok.end(),
                                         [](unsigned char c) { return std::isspace(c); }),
                          tok.end());
                line.tokens.push_back(tok);
                i = close + 1;
            } else {
                std::size_t j = i;
                while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j])) &&
                       raw[j] != '{')
                    ++j;
                line.tokens.push_back(raw.substr(i, j - i));
                i = j;
            }
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

long long parse_int(const Line& line, const std::string& tok, const char* what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(line.number, std::string("expected an integer ") + what + ", got '" + tok + "'");
    }
}

/// "key=value" with a fixed key.
long long parse_keyed_int(const Line& line, const std::string& tok, const std::string& key) {
    auto eq = tok.find('=');
    if (eq == std::string::npos || tok.substr(0, eq) != key)
        throw ParseError(line.number, "expected '" + key + "=<int>', got '" + tok + "'");
    return parse_int(line, tok.substr(eq + 1), key.c_str());
}

Subset parse_subset(const Line& line, const std::string& tok, SampleSpace space) {
    if (tok.size() < 3 || tok.front() != '{' || tok.back() != '}')
        throw ParseError(line.number, "expected a subset like {1,2}, got '" + tok + "'");
    std::uint32_t mask = 0;
    std::string body = tok.substr(1, tok.size() - 2);
    std::istringstream in(body);
    std::string part;
    while (std::getline(in, part, ',')) {
        long long e = parse_int(line, part, "element");
        if (e < 1 || e > space.size())
            throw ParseError(line.number, "element " + std::to_string(e) + " outside 1.." +
                                              std::to_string(space.size()));
        mask |= 1u << (e - 1);
    }
    if (mask == 0) throw ParseError(line.number, "empty subset");
    return Subset(mask, space);
}

Rat parse_value(const Line& line, const std::string& tok, bool decimal_ok) {
    try {
        return decimal_ok ? Rat::parse_decimal(tok) : Rat::parse(tok);
    } catch (const std::exception& e) {
        throw ParseError(line.number, decimal_ok
                                          ? "expected a fraction or decimal, got '" + tok + "'"
                                          : "expected a fraction like 1/2, got '" + tok + "'");
    }
}

Document parse_text(const std::string& text, bool decimal_mode) {
    std::vector<Line> lines = tokenize(text);
    if (lines.empty()) throw ParseError(1, "empty document");

    const Line& head = lines.front();
    if (head.tokens.size() != 2 || head.tokens[0] != "space")
        throw ParseError(head.number, "document must start with 'space n=<int>'");
    long long n = parse_keyed_int(head, head.tokens[1], "n");
    if (n < 1 || n > kMaxElements)
        throw ParseError(head.number, "n must be in 1.." + std::to_string(kMaxElements));
    SampleSpace space(static_cast<int>(n));

    struct SetP {
        Subset set;
        Rat p;
    };
    struct GivenP {
        int x;
        Subset set;
        Rat p;
    };
    struct SetMult {
        Subset set;
        BigInt mult;
        int line;
    };
    struct Block { // one multicover, possibly with a weight (model component)
        std::optional<Rat> weight;
        std::optional<std::pair<BigInt, int>> declared_height; // value, line
        std::vector<SetMult> sets;
        int line = 0;
    };

    std::vector<SetP> car_lines;
    std::vector<GivenP> given_lines;
    std::vector<Block> blocks;
    bool has_mult = false;

    auto current_block = [&]() -> Block& {
        if (blocks.empty()) blocks.push_back({});
        return blocks.back();
    };

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const Line& line = lines[li];
        const auto& t = line.tokens;
        if (t[0] == "set") {
            if (t.size() == 4 && t[2] == "p") {
                car_lines.push_back({parse_subset(line, t[1], space), parse_value(line, t[3], decimal_mode)});
            } else if (t.size() == 4 && t[2] == "mult") {
                has_mult = true;
                current_block().sets.push_back(
                    {parse_subset(line, t[1], space), BigInt(parse_int(line, t[3], "multiplicity")),
                     line.number});
            } else {
                throw ParseError(line.number, "expected 'set {..} p <frac>' or 'set {..} mult <int>'");
            }
        } else if (t[0] == "given") {
            if (t.size() != 6 || t[2] != "set" || t[4] != "p")
                throw ParseError(line.number, "expected 'given <x> set {..} p <frac>'");
            long long x = parse_int(line, t[1], "element");
            if (x < 1 || x > space.size())
                throw ParseError(line.number, "element " + std::to_string(x) + " outside 1.." +
                                                  std::to_string(space.size()));
            given_lines.push_back(
                {static_cast<int>(x), parse_subset(line, t[3], space), parse_value(line, t[5], decimal_mode)});
        } else if (t[0] == "height") {
            if (t.size() != 2) throw ParseError(line.number, "expected 'height k=<int>'");
            has_mult = true;
            Block& b = current_block();
            if (b.declared_height)
                throw ParseError(line.number, "duplicate height declaration in one multicover");
            b.declared_height = {BigInt(parse_keyed_int(line, t[1], "k")), line.number};
        } else if (t[0] == "multicover") {
            if (t.size() != 3 || t[1] != "weight")
                throw ParseError(line.number, "expected 'multicover weight <frac>'");
            has_mult = true;
            Block b;
            b.weight = parse_value(line, t[2], false);
            b.line = line.number;
            blocks.push_back(std::move(b));
        } else if (t[0] == "space") {
            throw ParseError(line.number, "duplicate space header");
        } else {
            throw ParseError(line.number, "unrecognized directive '" + t[0] + "'");
        }
    }

    const bool has_car = !car_lines.empty();
    const bool has_given = !given_lines.empty();
    if (has_car + has_given + has_mult > 1)
        throw ParseError(lines.back().number,
                         "document mixes mechanism, coarsening-table and multicover lines");

    if (has_given) {
        std::map<CoarseningMechanism::Key, Rat> table;
        for (const auto& g : given_lines) {
            auto key = std::make_pair(g.x, g.set.mask());
            if (table.count(key))
                throw ParseError(head.number, "duplicate entry for given " + std::to_string(g.x) +
                                                  " set " + g.set.str());
            table[key] = g.p;
        }
        return CoarseningMechanism(space, table);
    }

    if (has_mult) {
        std::vector<UniformMulticover> mcs;
        std::vector<Rat> weights;
        bool any_weight = false;
        for (const Block& b : blocks) {
            if (b.sets.empty()) throw ParseError(b.line ? b.line : head.number, "multicover with no sets");
            std::map<Subset, BigInt> mult;
            for (const auto& sm : b.sets) {
                if (mult.count(sm.set)) throw ParseError(sm.line, "duplicate set " + sm.set.str());
                if (sm.mult <= 0) throw ParseError(sm.line, "multiplicity must be positive");
                mult.emplace(sm.set, sm.mult);
            }
            if (b.declared_height) {
                // checked against the raw multiplicities, before normalization
                BigInt count = 0;
                for (const auto& [s, m] : mult)
                    if (s.contains(1)) count += m;
                if (count != b.declared_height->first)
                    throw ParseError(b.declared_height->second,
                                     "declared height " + b.declared_height->first.str() +
                                         " does not match the multiplicities (element 1 lies in " +
                                         count.str() + " sets)");
            }
            mcs.emplace_back(space, mult);
            if (b.weight) {
                any_weight = true;
                weights.push_back(*b.weight);
            }
        }
        if (!any_weight) {
            if (mcs.size() != 1) throw ParseError(head.number, "multiple multicovers need weights");
            return mcs.front();
        }
        if (weights.size() != mcs.size())
            throw ParseError(head.number, "every multicover of a model needs a weight");
        return ProceduralModel(std::move(mcs), std::move(weights));
    }

    if (!has_car) throw ParseError(head.number, "document has no content lines");

    std::map<std::uint32_t, Rat> values;
    for (const auto& sp : car_lines) {
        if (values.count(sp.set.mask()))
            throw ParseError(head.number, "duplicate set " + sp.set.str());
        values[sp.set.mask()] = sp.p;
    }
    if (decimal_mode) return ApproxCarTable{space, std::move(values)};
    return CarMechanism(space, values);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

constexpr std::int64_t kJsonIntLimit = 9007199254740992LL; // 2^53, exact in doubles

BigInt bigint_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) return BigInt(j.get<std::string>());
    throw std::invalid_argument(std::string("json: ") + what + " must be an integer or string");
}

json bigint_to_json(const BigInt& v) {
    if (v > -BigInt(kJsonIntLimit) && v < BigInt(kJsonIntLimit)) return v.convert_to<std::int64_t>();
    return v.str();
}

SampleSpace space_from_json(const json& j) {
    if (!j.contains("space")) throw std::invalid_argument("json: missing 'space'");
    return SampleSpace(j.at("space").get<int>());
}

Subset subset_from_json(const json& j, SampleSpace space) {
    std::uint32_t mask = 0;
    for (const auto& e : j) {
        int x = e.get<int>();
        if (x < 1 || x > space.size())
            throw std::invalid_argument("json: element " + std::to_string(x) + " outside the space");
        mask |= 1u << (x - 1);
    }
    return Subset(mask, space);
}

UniformMulticover multicover_from_json(const json& j) {
    SampleSpace space = space_from_json(j);
    std::map<Subset, BigInt> mult;
    for (const auto& entry : j.at("sets"))
        mult.emplace(subset_from_json(entry.at("set"), space),
                     bigint_from_json(entry.at("mult"), "mult"));
    UniformMulticover mc(space, mult);
    if (j.contains("height") && bigint_from_json(j.at("height"), "height") != mc.height())
        throw std::invalid_argument("json: declared height does not match the multiplicities");
    return mc;
}

Document parse_json_document(const std::string& text, bool decimal_mode) {
    json j = json::parse(text);
    const std::string type = j.at("type").get<std::string>();
    if (type == "car") {
        SampleSpace space = space_from_json(j);
        std::map<std::uint32_t, Rat> values;
        for (const auto& entry : j.at("probs"))
            values[subset_from_json(entry.at("set"), space).mask()] = rat_from_json(entry.at("p"));
        if (decimal_mode) return ApproxCarTable{space, std::move(values)};
        return CarMechanism(space, values);
    }
    if (type == "coarsening") {
        SampleSpace space = space_from_json(j);
        std::map<CoarseningMechanism::Key, Rat> table;
        for (const auto& entry : j.at("entries"))
            table[{entry.at("given").get<int>(), subset_from_json(entry.at("set"), space).mask()}] =
                rat_from_json(entry.at("p"));
        return CoarseningMechanism(space, table);
    }
    if (type == "multicover") return multicover_from_json(j);
    if (type == "model") {
        std::vector<UniformMulticover> mcs;
        std::vector<Rat> weights;
        for (const auto& comp : j.at("components")) {
            weights.push_back(rat_from_json(comp.at("weight")));
            mcs.push_back(multicover_from_json(comp.at("multicover")));
        }
        return ProceduralModel(std::move(mcs), std::move(weights));
    }
    throw std::invalid_argument("json: unknown document type '" + type + "'");
}

} // namespace

Document parse_document(const std::string& text, bool decimal_mode) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return parse_json_document(text, decimal_mode);
        break;
    }
    return parse_text(text, decimal_mode);
}

Document load_document(const std::string& path, bool decimal_mode) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str(), decimal_mode);
}

std::string to_text(const CarMechanism& mech) {
    std::string out = "space n=" + std::to_string(mech.space().size()) + "\n";
    for (const auto& [mask, p] : mech.probs())
        out += "set " + Subset(mask, mech.space()).str() + " p " + p.str() + "\n";
    return out;
}

std::string to_text(const CoarseningMechanism& mech) {
    std::string out = "space n=" + std::to_string(mech.space().size()) + "\n";
    for (const auto& [key, p] : mech.table())
        out += "given " + std::to_string(key.first) + " set " + Subset(key.second, mech.space()).str() +
               " p " + p.str() + "\n";
    return out;
}

namespace {

std::string multicover_body(const UniformMulticover& mc) {
    std::string out = "height k=" + mc.height().str() + "\n";
    for (const auto& [mask, n] : mc.multiplicities())
        out += "set " + Subset(mask, mc.space()).str() + " mult " + n.str() + "\n";
    return out;
}

} // namespace

std::string to_text(const UniformMulticover& mc) {
    return "space n=" + std::to_string(mc.space().size()) + "\n" + multicover_body(mc);
}

std::string to_text(const ProceduralModel& model) {
    std::string out = "space n=" + std::to_string(model.space().size()) + "\n";
    for (std::size_t j = 0; j < model.multicovers().size(); ++j) {
        out += "multicover weight " + model.weights()[j].str() + "\n";
        out += multicover_body(model.multicovers()[j]);
    }
    return out;
}

nlohmann::json rat_to_json(const Rat& r) {
    return json{{"num", bigint_to_json(r.num())}, {"den", bigint_to_json(r.den())}};
}

Rat rat_from_json(const nlohmann::json& j) {
    return Rat(bigint_from_json(j.at("num"), "num"), bigint_from_json(j.at("den"), "den"));
}

nlohmann::json subset_to_json(const Subset& s) {
    json arr = json::array();
    for (int e : s.elements()) arr.push_back(e);
    return arr;
}

nlohmann::json to_json(const CarMechanism& mech) {
    json probs = json::array();
    for (const auto& [mask, p] : mech.probs())
        probs.push_back({{"set", subset_to_json(Subset(mask, mech.space()))}, {"p", rat_to_json(p)}});
    return json{{"type", "car"}, {"space", mech.space().size()}, {"probs", probs}};
}

nlohmann::json to_json(const CoarseningMechanism& mech) {
    json entries = json::array();
    for (const auto& [key, p] : mech.table())
        entries.push_back({{"given", key.first},
                           {"set", subset_to_json(Subset(key.second, mech.space()))},
                           {"p", rat_to_json(p)}});
    return json{{"type", "coarsening"}, {"space", mech.space().size()}, {"entries", entries}};
}

namespace {

json multicover_to_json_body(const UniformMulticover& mc) {
    json sets = json::array();
    for (const auto& [mask, n] : mc.multiplicities())
        sets.push_back({{"set", subset_to_json(Subset(mask, mc.space()))}, {"mult", bigint_to_json(n)}});
    return json{{"type", "multicover"},
                {"space", mc.space().size()},
                {"height", bigint_to_json(mc.height())},
                {"sets", sets}};
}

} // namespace

nlohmann::json to_json(const UniformMulticover& mc) { return multicover_to_json_body(mc); }

nlohmann::json to_json(const ProceduralModel& model) {
    json comps = json::array();
    for (std::size_t j = 0; j < model.multicovers().size(); ++j)
        comps.push_back({{"weight", rat_to_json(model.weights()[j])},
                         {"multicover", multicover_to_json_body(model.multicovers()[j])}});
    return json{{"type", "model"}, {"space", model.space().size()}, {"components", comps}};
}

nlohmann::json to_json(const SimReport& report) {
    const SampleSpace space(report.space_n);
    json elems = json::array();
    for (const auto& e : report.per_element) {
        json cells = json::array();
        for (const auto& c : e.cells)
            cells.push_back({{"set", subset_to_json(Subset(c.mask, space))},
                             {"observed", c.observed},
                             {"expected_p", rat_to_json(c.expected_p)}});
        elems.push_back({{"x", e.x},
                         {"cells", cells},
                         {"chi_square", e.chi_square},
                         {"df", e.df},
                         {"critical_999", e.critical_999},
                         {"pass", e.pass},
                         {"merged_cells", e.merged_cells}});
    }
    return json{{"type", "sim_report"}, {"space", report.space_n}, {"seed", report.seed},
                {"samples_per_x", report.samples_per_x}, {"per_element", elems},
                {"all_pass", report.all_pass}, {"warnings", report.warnings}};
}

} // namespace car
