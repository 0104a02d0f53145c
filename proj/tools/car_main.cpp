// car: construct, verify, decompose and simulate coarsening-at-random
// mechanisms over small finite sample spaces, in exact rational arithmetic.
//
// Exit codes: 0 success (for `verify`: the input is CAR), 1 domain error or
// negative verdict, 2 malformed input.

#include <car/fibonacci.hpp>
#include <car/io.hpp>
#include <car/multicover.hpp>
#include <car/polytope.hpp>
#include <car/simulate.hpp>
#include <car/verify.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>
#include <string>

using namespace car;
using nlohmann::json;

namespace {

std::string subset_str(std::uint32_t mask, SampleSpace space) { return Subset(mask, space).str(); }

std::string support_str(const CarMechanism& m) {
    std::string out;
    for (const auto& [mask, _] : m.probs()) {
        if (!out.empty()) out += " ";
        out += subset_str(mask, m.space());
    }
    return out;
}

json mechanism_summary_json(const CarMechanism& m) {
    json j = to_json(m);
    j["height"] = rat_to_json(Rat(height(m)));
    return j;
}

int cmd_verify(const std::string& path, bool as_json) {
    Document doc = load_document(path);
    CarMechanism mech = [&] {
        if (auto* table = std::get_if<CoarseningMechanism>(&doc)) {
            CarCheck check = is_car(*table);
            if (!check.ok) {
                if (as_json) {
                    json j{{"car", false},
                           {"witness",
                            {{"set", subset_to_json(check.witness->set)},
                             {"x", check.witness->x},
                             {"x_prime", check.witness->x_prime},
                             {"p_x", rat_to_json(check.witness->prob_x)},
                             {"p_x_prime", rat_to_json(check.witness->prob_x_prime)}}}};
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::cout << "CAR: no\nwitness: " << check.witness->str() << "\n";
                }
                std::exit(1);
            }
            return to_car(*table);
        }
        if (auto* mech = std::get_if<CarMechanism>(&doc)) return *mech;
        throw std::invalid_argument("verify expects a mechanism or coarsening-table document");
    }();

    const bool extreme = is_extreme(mech);
    UniformMulticover mc = to_multicover(mech);
    std::optional<bool> ccar;
    if (mech.space().size() <= kEnumerationCap) ccar = is_ccar(mech).has_value();

    if (as_json) {
        json j{{"car", true},
               {"mechanism", to_json(mech)},
               {"extreme", extreme},
               {"height", rat_to_json(Rat(mc.height()))},
               {"ccar", ccar ? json(*ccar) : json(nullptr)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "CAR: yes\n";
        std::cout << "support: " << support_str(mech) << "\n";
        std::cout << "pi:\n";
        for (const auto& [mask, p] : mech.probs())
            std::cout << "  set " << subset_str(mask, mech.space()) << " p " << p.str() << "\n";
        std::cout << "height: " << mc.height().str() << "\n";
        std::cout << "extreme: " << (extreme ? "yes" : "no") << "\n";
        if (ccar)
            std::cout << "CCAR: " << (*ccar ? "yes" : "no") << "\n";
        else
            std::cout << "CCAR: not checked (n > " << kEnumerationCap << ")\n";
    }
    return 0;
}

int cmd_extremes(int n, bool as_json) {
    ExtremeCatalog catalog = enumerate_extremes(SampleSpace(n));
    if (as_json) {
        json list = json::array();
        for (const auto& m : catalog.mechanisms) list.push_back(mechanism_summary_json(m));
        std::cout << json{{"n", n}, {"count", catalog.mechanisms.size()}, {"extremes", list}}.dump(2)
                  << "\n";
        return 0;
    }
    std::cout << "extremes: " << catalog.mechanisms.size() << " (n=" << n << ")\n";
    int i = 0;
    for (const auto& m : catalog.mechanisms)
        std::cout << "[" << ++i << "] height " << height(m).str() << ": " << m.str() << "\n";
    return 0;
}

CarMechanism mechanism_from(Document& doc, const char* cmd) {
    if (auto* mech = std::get_if<CarMechanism>(&doc)) return *mech;
    if (auto* table = std::get_if<CoarseningMechanism>(&doc)) {
        CarCheck check = is_car(*table);
        if (!check.ok)
            throw std::domain_error(std::string(cmd) + ": input is not CAR; " + check.witness->str());
        return to_car(*table);
    }
    throw std::invalid_argument(std::string(cmd) + " expects a mechanism document");
}

int cmd_decompose(const std::string& path, bool as_json) {
    Document doc = load_document(path);
    CarMechanism mech = mechanism_from(doc, "decompose");
    MixtureDecomposition d = decompose(mech);
    if (as_json) {
        json terms = json::array();
        for (const auto& t : d.terms)
            terms.push_back({{"weight", rat_to_json(t.weight)},
                             {"extreme", t.extreme},
                             {"mechanism", mechanism_summary_json(t.mechanism)}});
        std::cout << json{{"terms", terms}}.dump(2) << "\n";
        return 0;
    }
    std::cout << "terms: " << d.terms.size() << "\n";
    for (const auto& t : d.terms)
        std::cout << "lambda " << t.weight.str() << " height " << height(t.mechanism).str()
                  << " support " << support_str(t.mechanism) << "\n";
    return 0;
}

int cmd_multicover(const std::string& path, bool as_json) {
    Document doc = load_document(path);
    if (auto* mc = std::get_if<UniformMulticover>(&doc)) {
        // multicover -> mechanism
        CarMechanism mech = from_multicover(*mc);
        std::cout << (as_json ? to_json(mech).dump(2) + "\n" : to_text(mech));
        return 0;
    }
    CarMechanism mech = mechanism_from(doc, "multicover");
    UniformMulticover mc = to_multicover(mech);
    std::cout << (as_json ? to_json(mc).dump(2) + "\n" : to_text(mc));
    return 0;
}

int cmd_ccar(const std::string& path, bool as_json) {
    Document doc = load_document(path);
    CarMechanism mech = mechanism_from(doc, "ccar");
    auto dec = is_ccar(mech);
    if (as_json) {
        json j{{"ccar", dec.has_value()}};
        if (dec) {
            json terms = json::array();
            for (const auto& [w, partition] : dec->terms) {
                json blocks = json::array();
                for (const Subset& b : partition.sets()) blocks.push_back(subset_to_json(b));
                terms.push_back({{"weight", rat_to_json(w)}, {"partition", blocks}});
            }
            j["decomposition"] = terms;
        }
        std::cout << j.dump(2) << "\n";
        return dec ? 0 : 1;
    }
    if (!dec) {
        std::cout << "CCAR: no\n";
        return 1;
    }
    std::cout << "CCAR: yes\n";
    for (const auto& [w, partition] : dec->terms)
        std::cout << "lambda " << w.str() << " partition " << partition.str() << "\n";
    return 0;
}

int cmd_fibonacci(int n, bool verify_flag, bool as_json) {
    FibMatrix s = fib_matrix(n);
    json j{{"n", n}};
    if (!as_json) std::cout << "S_" << n << ":\n" << s.str();
    else {
        json rows = json::array();
        for (int i = 0; i < n; ++i) {
            json row = json::array();
            for (int k = 0; k < n; ++k) row.push_back(s.entry(i, k));
            rows.push_back(row);
        }
        j["matrix"] = rows;
    }
    if (verify_flag) {
        if (n % 2 == 0) throw std::domain_error("fibonacci --verify needs odd n");
        FibSolution sol = fib_solution(n); // throws if the closed form fails
        if (as_json) {
            json z = json::array();
            for (const Rat& v : sol.z) z.push_back(rat_to_json(v));
            j["solution"] = z;
            j["height"] = rat_to_json(Rat(sol.height));
            j["verified"] = true;
        } else {
            std::cout << "solution:";
            for (const Rat& v : sol.z) std::cout << " " << v.str();
            std::cout << "\nheight = " << sol.height.str() << " = F_" << n << "\n";
            std::cout << "verified: unique solution matches the Fibonacci ratios, height F_" << n
                      << "\n";
            if (n <= kMaxElements)
                std::cout << "extreme: " << (is_extreme(fib_as_mechanism(n)) ? "yes" : "no") << "\n";
        }
    }
    if (as_json) std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const std::string& path, long long samples, std::uint64_t seed, bool as_json) {
    Document doc = load_document(path);
    ProceduralModel model = [&] {
        if (auto* m = std::get_if<ProceduralModel>(&doc)) return *m;
        if (auto* mc = std::get_if<UniformMulticover>(&doc))
            return ProceduralModel({*mc}, {Rat(1)});
        // a mechanism document: rebuild the exactly-simulating model
        return model_from_mechanism(mechanism_from(doc, "simulate"));
    }();

    SimReport report = validate(model, samples, seed);
    if (as_json) {
        std::cout << to_json(report).dump(2) << "\n";
    } else {
        std::cout << "simulate: " << samples << " samples per element, seed " << seed << "\n";
        std::cout << "mechanism: " << model_mechanism(model).str() << "\n";
        for (const auto& e : report.per_element) {
            std::printf("x=%d: chi2 %.6g df %d crit %.6g %s\n", e.x, e.chi_square, e.df,
                        e.critical_999, e.pass ? "pass" : "FAIL");
            for (const auto& c : e.cells)
                std::cout << "  set " << subset_str(c.mask, model.space()) << " observed "
                          << c.observed << " expected p " << c.expected_p.str() << "\n";
        }
        for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
        std::cout << (report.all_pass ? "all elements pass at the 99.9% level\n"
                                      : "chi-square gate FAILED\n");
    }
    return report.all_pass ? 0 : 1;
}

int cmd_rationalize(const std::string& path, bool from_decimal, const std::string& eps_text,
                    bool as_json) {
    if (!from_decimal)
        throw std::invalid_argument("rationalize requires --from-decimal (decimal input is only "
                                    "accepted behind this flag)");
    Rat eps = Rat::parse(eps_text);
    Document doc = load_document(path, /*decimal_mode=*/true);
    ApproxCarTable table = [&] {
        if (auto* t = std::get_if<ApproxCarTable>(&doc)) return *t;
        if (auto* m = std::get_if<CarMechanism>(&doc)) {
            ApproxCarTable t{m->space(), {}};
            for (const auto& [mask, p] : m->probs()) t.values[mask] = p;
            return t;
        }
        throw std::invalid_argument("rationalize expects a mechanism-style document");
    }();
    CarMechanism mech = rationalize(table, eps);

    Rat worst(0);
    for (const auto& [mask, v] : table.values) {
        Rat d = (mech.prob(mask) - v).abs();
        if (d > worst) worst = d;
    }
    if (as_json) {
        json j{{"mechanism", to_json(mech)},
               {"epsilon", rat_to_json(eps)},
               {"max_deviation", rat_to_json(worst)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "# max deviation " << worst.str() << " (epsilon " << eps.str() << ")\n";
        std::cout << to_text(mech);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact coarsening-at-random mechanisms: verification, polytope structure, "
                 "multicovers and simulation"};
    app.require_subcommand(1);

    std::string file;
    std::string eps_text = "1/1000000";
    int n = 3;
    long long samples = 100000;
    std::uint64_t seed = 0;
    bool as_json = false;
    bool verify_flag = false;
    bool from_decimal = false;

    auto* verify = app.add_subcommand("verify", "check the CAR property of a mechanism file");
    verify->add_option("file", file)->required();
    verify->add_flag("--json", as_json);

    auto* extremes = app.add_subcommand("extremes", "list every extreme mechanism of a space");
    extremes->add_option("--n", n)->required();
    extremes->add_flag("--json", as_json);

    auto* decomp = app.add_subcommand("decompose", "write a mechanism as a mixture of extremes");
    decomp->add_option("file", file)->required();
    decomp->add_flag("--json", as_json);

    auto* mc = app.add_subcommand("multicover",
                                  "convert between a rational mechanism and its multicover");
    mc->add_option("file", file)->required();
    mc->add_flag("--json", as_json);

    auto* ccar = app.add_subcommand("ccar", "test membership in the partition-mixture class");
    ccar->add_option("file", file)->required();
    ccar->add_flag("--json", as_json);

    auto* fib = app.add_subcommand("fibonacci", "inductive matrix family and its exact solutions");
    fib->add_option("--n", n)->required();
    fib->add_flag("--verify", verify_flag);
    fib->add_flag("--json", as_json);

    auto* sim = app.add_subcommand("simulate", "draw coarsenings and run the chi-square gate");
    sim->add_option("file", file)->required();
    sim->add_option("--samples", samples);
    sim->add_option("--seed", seed);
    sim->add_flag("--json", as_json);

    auto* rat = app.add_subcommand("rationalize",
                                   "fit an exact rational mechanism to a decimal table");
    rat->add_option("file", file)->required();
    rat->add_flag("--from-decimal", from_decimal);
    rat->add_option("--epsilon", eps_text);
    rat->add_flag("--json", as_json);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(file, as_json);
        if (extremes->parsed()) return cmd_extremes(n, as_json);
        if (decomp->parsed()) return cmd_decompose(file, as_json);
        if (mc->parsed()) return cmd_multicover(file, as_json);
        if (ccar->parsed()) return cmd_ccar(file, as_json);
        if (fib->parsed()) return cmd_fibonacci(n, verify_flag, as_json);
        if (sim->parsed()) return cmd_simulate(file, samples, seed, as_json);
        if (rat->parsed()) return cmd_rationalize(file, from_decimal, eps_text, as_json);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
