#include "psvote/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace psvote {

using nlohmann::json;

UtilityMatrix<double> to_double(const UtilityMatrix<Rat>& u) {
  std::vector<std::vector<double>> rows(u.rows.size(), std::vector<double>(u.m));
  for (size_t i = 0; i < u.rows.size(); ++i)
    for (int a = 0; a < u.m; ++a) rows[i][a] = to_double(u.rows[i][a]);
  return UtilityMatrix<double>::weighted(u.m, rows, u.counts);
}

PSVector<double> to_double(const PSVector<Rat>& g) {
  std::vector<double> v(g.values.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = to_double(g.values[i]);
  return PSVector<double>(v);
}

PSMatrix<double> to_double(const PSMatrix<Rat>& g) {
  std::vector<std::vector<double>> rows(g.rows.size(), std::vector<double>(g.m));
  for (size_t i = 0; i < rows.size(); ++i)
    for (int a = 0; a < g.m; ++a) rows[i][a] = to_double(g.rows[i][a]);
  return PSMatrix<double>(g.m, rows);
}

namespace {

Rat value_to_rat(const json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(BigInt(j.get<long long>()));
  if (j.is_number()) return rat_from_double(j.get<double>());
  throw InputError("instance: " + what + " must be a number or \"p/q\" string");
}

std::vector<Rat> row_to_rats(const json& j, int m, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != m)
    throw InputError("instance: " + what + " must be an array of length m");
  std::vector<Rat> out;
  for (const auto& x : j) out.push_back(value_to_rat(x, what));
  return out;
}

std::vector<std::vector<Rat>> matrix_to_rats(const json& j, size_t rows, int m,
                                             const std::string& what) {
  if (!j.is_array() || j.size() != rows)
    throw InputError("instance: " + what + " must have one row per voter row");
  std::vector<std::vector<Rat>> out;
  for (const auto& r : j) out.push_back(row_to_rats(r, m, what));
  return out;
}

json rat_to_json(const Rat& r) {
  if (denominator(r) == 1 && numerator(r) >= -(BigInt(1) << 53) &&
      numerator(r) <= (BigInt(1) << 53))
    return json(numerator(r).convert_to<long long>());
  return json(rat_to_string(r));
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw InputError(std::string("instance: malformed JSON: ") + e.what());
  }
  if (!j.contains("m")) throw InputError("instance: missing \"m\"");
  int m = j["m"].get<int>();
  if (m < 2) throw InputError("instance: need m >= 2");

  Instance inst;
  std::vector<std::vector<Rat>> urows;
  std::vector<long long> counts;
  std::vector<Rat> gamma_values;
  std::vector<std::vector<Rat>> gamma_rows, delta_rows, eta_rows;
  bool gamma_is_matrix = false;

  if (j.contains("groups")) {
    for (const auto& g : j["groups"]) {
      if (!g.contains("count") || !g.contains("utilities"))
        throw InputError("instance: each group needs \"count\" and \"utilities\"");
      long long c = g["count"].get<long long>();
      if (c < 1) throw InputError("instance: group count must be >= 1");
      counts.push_back(c);
      urows.push_back(row_to_rats(g["utilities"], m, "utilities"));
      if (g.contains("gamma")) {
        const auto& gg = g["gamma"];
        if (gg.is_array()) {
          gamma_is_matrix = true;
          gamma_rows.push_back(row_to_rats(gg, m, "gamma"));
        } else {
          gamma_values.push_back(value_to_rat(gg, "gamma"));
        }
      }
      if (g.contains("delta")) delta_rows.push_back(row_to_rats(g["delta"], m, "delta"));
      if (g.contains("eta")) eta_rows.push_back(row_to_rats(g["eta"], m, "eta"));
    }
  } else {
    if (!j.contains("utilities")) throw InputError("instance: missing \"utilities\"");
    for (const auto& r : j["utilities"]) {
      urows.push_back(row_to_rats(r, m, "utilities"));
      counts.push_back(1);
    }
    if (j.contains("n") && j["n"].get<long long>() != static_cast<long long>(urows.size()))
      throw InputError("instance: \"n\" does not match the number of utility rows");
    if (j.contains("gamma")) {
      const auto& g = j["gamma"];
      if (g.is_object()) {
        if (!g.contains("matrix")) throw InputError("instance: gamma object needs \"matrix\"");
        gamma_is_matrix = true;
        gamma_rows = matrix_to_rats(g["matrix"], urows.size(), m, "gamma matrix");
      } else if (g.is_array()) {
        for (const auto& x : g) gamma_values.push_back(value_to_rat(x, "gamma"));
      } else {
        // Single scalar: uniform gamma.
        gamma_values.assign(urows.size(), value_to_rat(g, "gamma"));
      }
    }
    if (j.contains("delta")) delta_rows = matrix_to_rats(j["delta"], urows.size(), m, "delta");
    if (j.contains("eta")) eta_rows = matrix_to_rats(j["eta"], urows.size(), m, "eta");
  }

  try {
    inst.u = UtilityMatrix<Rat>::weighted(m, urows, counts);
  } catch (const InputError& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
  if (gamma_is_matrix) {
    if (gamma_rows.size() != urows.size())
      throw InputError("instance: gamma matrix rows do not match utility rows");
    inst.gamma_matrix = PSMatrix<Rat>(m, gamma_rows);
  } else if (!gamma_values.empty()) {
    if (gamma_values.size() != urows.size())
      throw InputError("instance: gamma length does not match voter rows");
    inst.gamma = PSVector<Rat>(gamma_values);
  }
  if (!delta_rows.empty() || !eta_rows.empty()) {
    if (delta_rows.size() != urows.size() || eta_rows.size() != urows.size())
      throw InputError("instance: delta/eta must both be given, one row per voter row");
    inst.errors = ErrorMatrices<Rat>(m, delta_rows, eta_rows);
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("instance: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string instance_to_json(const Instance& inst, bool grouped, int indent) {
  json j;
  j["n"] = inst.u.voters();
  j["m"] = inst.u.m;
  if (grouped) {
    json groups = json::array();
    for (size_t i = 0; i < inst.u.rows.size(); ++i) {
      json g;
      g["count"] = inst.u.counts[i];
      json row = json::array();
      for (const auto& x : inst.u.rows[i]) row.push_back(rat_to_json(x));
      g["utilities"] = row;
      if (inst.gamma) g["gamma"] = rat_to_json(inst.gamma->values[i]);
      if (inst.gamma_matrix) {
        json gr = json::array();
        for (const auto& x : inst.gamma_matrix->rows[i]) gr.push_back(rat_to_json(x));
        g["gamma"] = gr;
      }
      if (inst.errors) {
        json dr = json::array(), er = json::array();
        for (const auto& x : inst.errors->delta[i]) dr.push_back(rat_to_json(x));
        for (const auto& x : inst.errors->eta[i]) er.push_back(rat_to_json(x));
        g["delta"] = dr;
        g["eta"] = er;
      }
      groups.push_back(g);
    }
    j["groups"] = groups;
  } else {
    json rows = json::array();
    json gammas = json::array();
    json deltas = json::array(), etas = json::array(), gmat = json::array();
    for (size_t i = 0; i < inst.u.rows.size(); ++i) {
      for (long long c = 0; c < inst.u.counts[i]; ++c) {
        json row = json::array();
        for (const auto& x : inst.u.rows[i]) row.push_back(rat_to_json(x));
        rows.push_back(row);
        if (inst.gamma) gammas.push_back(rat_to_json(inst.gamma->values[i]));
        if (inst.gamma_matrix) {
          json gr = json::array();
          for (const auto& x : inst.gamma_matrix->rows[i]) gr.push_back(rat_to_json(x));
          gmat.push_back(gr);
        }
        if (inst.errors) {
          json dr = json::array(), er = json::array();
          for (const auto& x : inst.errors->delta[i]) dr.push_back(rat_to_json(x));
          for (const auto& x : inst.errors->eta[i]) er.push_back(rat_to_json(x));
          deltas.push_back(dr);
          etas.push_back(er);
        }
      }
    }
    j["utilities"] = rows;
    if (inst.gamma) j["gamma"] = gammas;
    if (inst.gamma_matrix) j["gamma"] = json{{"matrix", gmat}};
    if (inst.errors) {
      j["delta"] = deltas;
      j["eta"] = etas;
    }
  }
  return j.dump(indent);
}

void save_instance(const Instance& inst, const std::string& path, bool grouped) {
  std::ofstream out(path);
  if (!out) throw InputError("instance: cannot write '" + path + "'");
  out << instance_to_json(inst, grouped) << "\n";
}

Instance instance_from_construction(const ConstructionSpec& spec) {
  Instance inst;
  inst.u = spec.u;
  inst.gamma = spec.gamma_vec;
  return inst;
}

std::string profile_to_json(const Profile& p, int indent) {
  json j;
  j["m"] = p.m;
  json rankings = json::array();
  for (const auto& r : p.rows) rankings.push_back(r.order);
  j["rankings"] = rankings;
  j["counts"] = p.counts;
  return j.dump(indent);
}

Profile profile_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("profile: malformed JSON: ") + e.what());
  }
  Profile p;
  if (j.is_array()) {
    // Bare array of permutations, one voter each.
    for (const auto& r : j) {
      p.rows.push_back(Ranking{r.get<std::vector<int>>()});
      p.counts.push_back(1);
    }
    p.m = p.rows.empty() ? 0 : p.rows[0].m();
  } else {
    p.m = j["m"].get<int>();
    for (const auto& r : j["rankings"]) p.rows.push_back(Ranking{r.get<std::vector<int>>()});
    if (j.contains("counts"))
      p.counts = j["counts"].get<std::vector<long long>>();
    else
      p.counts.assign(p.rows.size(), 1);
  }
  p.validate();
  return p;
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void emit_report(const Report& rep, const std::string& format, std::ostream& os) {
  if (format == "csv") {
    os << "# " << kVersion << "\n";
    if (!rep.command.empty()) os << "# command: " << rep.command << "\n";
    if (!rep.config.empty()) os << "# config: " << rep.config << "\n";
    if (rep.seed) os << "# seed: " << *rep.seed << "\n";
    for (size_t c = 0; c < rep.columns.size(); ++c)
      os << (c ? "," : "") << csv_escape(rep.columns[c]);
    os << "\n";
    for (const auto& row : rep.rows) {
      for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_escape(row[c]);
      os << "\n";
    }
  } else if (format == "json") {
    json j;
    j["version"] = kVersion;
    if (!rep.command.empty()) j["command"] = rep.command;
    if (!rep.config.empty()) j["config"] = rep.config;
    if (rep.seed) j["seed"] = *rep.seed;
    j["columns"] = rep.columns;
    json rows = json::array();
    for (const auto& row : rep.rows) rows.push_back(row);
    j["rows"] = rows;
    os << j.dump(2) << "\n";
  } else {
    throw InputError("report: unknown format '" + format + "' (use csv or json)");
  }
}

void emit_report_file(const Report& rep, const std::string& format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("report: cannot write '" + path + "'");
  emit_report(rep, format, out);
}

}  // namespace psvote
