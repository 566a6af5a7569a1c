#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psvote/constructions.hpp"
#include "psvote/types.hpp"

namespace psvote {

inline constexpr const char* kVersion = "psvote 0.1.0";

/// A loaded problem instance: utilities plus public spirit (vector or
/// per-alternative matrix) and optional error matrices.
struct Instance {
  UtilityMatrix<Rat> u;
  std::optional<PSVector<Rat>> gamma;
  std::optional<PSMatrix<Rat>> gamma_matrix;
  std::optional<ErrorMatrices<Rat>> errors;

  PSVector<Rat> gamma_or_throw() const {
    if (!gamma) throw InputError("instance: per-voter gamma vector required");
    return *gamma;
  }
};

UtilityMatrix<double> to_double(const UtilityMatrix<Rat>& u);
PSVector<double> to_double(const PSVector<Rat>& g);
PSMatrix<double> to_double(const PSMatrix<Rat>& g);

/// Parses the instance JSON schema:
///   { "n", "m", "utilities": [[...]], "gamma": [...] | {"matrix": [[...]]},
///     "delta": [[...]], "eta": [[...]] }
/// or the grouped form { "n", "m", "groups": [{"count", "utilities", "gamma"}] }.
/// Values are numbers or "p/q" strings.
Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& json_text);
std::string instance_to_json(const Instance& inst, bool grouped, int indent = 2);
void save_instance(const Instance& inst, const std::string& path, bool grouped);

Instance instance_from_construction(const ConstructionSpec& spec);

std::string profile_to_json(const Profile& p, int indent = 2);
Profile profile_from_json_text(const std::string& text);

/// Deterministic report emission. Floats are printed with 12 significant
/// digits, rationals as p/q; metadata (version, config echo, seed) rides
/// along so a report is replayable.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string command;
  std::string config;
  std::optional<uint64_t> seed;
};

std::string format_double(double x);
void emit_report(const Report& rep, const std::string& format, std::ostream& os);
void emit_report_file(const Report& rep, const std::string& format, const std::string& path);

}  // namespace psvote
