#pragma once

#include <car/polytope.hpp>
#include <car/simulate.hpp>
#include <car/types.hpp>

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <variant>

namespace car {

/// Syntax error in a document, with 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

using Document =
    std::variant<CarMechanism, CoarseningMechanism, UniformMulticover, ProceduralModel, ApproxCarTable>;

/// Parses the line-oriented text format, or JSON when the first non-blank
/// character is '{'. With decimal_mode, plain `set ... p ...` documents are
/// returned as unvalidated ApproxCarTable and probability values may be
/// decimals; otherwise values must be exact fractions.
///
/// Text format (comments start with '#'):
///   space n=3                  header, required first
///   set {1,2} p 1/2            CAR mechanism line
///   given 2 set {2,3} p 1/2    coarsening-table line
///   height k=2                 multicover header (optional, checked)
///   set {1,2} mult 1           multicover line
///   multicover weight 1/2      starts one component of a model
Document parse_document(const std::string& text, bool decimal_mode = false);

Document load_document(const std::string& path, bool decimal_mode = false);

std::string to_text(const CarMechanism& mech);
std::string to_text(const CoarseningMechanism& mech);
std::string to_text(const UniformMulticover& mc);
std::string to_text(const ProceduralModel& model);

nlohmann::json rat_to_json(const Rat& r);
Rat rat_from_json(const nlohmann::json& j);
nlohmann::json subset_to_json(const Subset& s);

nlohmann::json to_json(const CarMechanism& mech);
nlohmann::json to_json(const CoarseningMechanism& mech);
nlohmann::json to_json(const UniformMulticover& mc);
nlohmann::json to_json(const ProceduralModel& model);
nlohmann::json to_json(const SimReport& report);

} // namespace car
