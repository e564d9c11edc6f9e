#include "contact_cli/output.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

namespace contact::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<std::string> sample_columns(Eigen::Index dim,
                                        const std::vector<ExtraColumn>& extras) {
  std::vector<std::string> cols{"t"};
  for (Eigen::Index i = 1; i <= dim; ++i) cols.push_back("q" + std::to_string(i));
  for (Eigen::Index i = 1; i <= dim; ++i) cols.push_back("p" + std::to_string(i));
  cols.push_back("s");
  cols.push_back("H");
  for (const auto& e : extras) cols.push_back(e.name);
  return cols;
}

namespace {

std::vector<double> sample_values(const SeparableContactModel& model,
                                  const ContactState& x,
                                  const std::vector<ExtraColumn>& extras) {
  std::vector<double> v{x.t};
  for (Eigen::Index i = 0; i < x.dim(); ++i) v.push_back(x.q(i));
  for (Eigen::Index i = 0; i < x.dim(); ++i) v.push_back(x.p(i));
  v.push_back(x.s);
  double h = std::nan("");
  try {
    h = hamiltonian(model, x);
  } catch (const ContactError&) {
  }
  v.push_back(h);
  for (const auto& e : extras) v.push_back(e.value(x));
  return v;
}

std::vector<std::pair<std::string, std::string>> metadata_fields(const RunMetadata& m) {
  const auto& c = m.counters;
  return {{"status", std::string(to_string(m.status))},
          {"steps", std::to_string(m.steps)},
          {"grad_V_evals", std::to_string(c.grad_V_evals)},
          {"V_evals", std::to_string(c.V_evals)},
          {"f_evals", std::to_string(c.f_evals)},
          {"df_ds_evals", std::to_string(c.df_ds_evals)},
          {"vector_field_evals", std::to_string(c.vector_field_evals)},
          {"a_map_evals", std::to_string(c.a_map_evals)},
          {"wall_time_s", format_double(m.wall_time_s)}};
}

// JSON has no inf/nan; they become null.
nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void write_trajectory(std::ostream& out, const std::string& format,
                      const SeparableContactModel& model,
                      const std::vector<ContactState>& samples, const RunMetadata& meta,
                      const std::vector<ExtraColumn>& extras) {
  const auto cols = sample_columns(model.dim(), extras);
  if (format == "jsonl") {
    for (const auto& x : samples) {
      const auto v = sample_values(model, x, extras);
      nlohmann::json rec = nlohmann::json::object();
      for (std::size_t i = 0; i < cols.size(); ++i) rec[cols[i]] = json_number(v[i]);
      out << rec.dump() << '\n';
    }
    nlohmann::json m = nlohmann::json::object();
    m["status"] = std::string(to_string(meta.status));
    m["steps"] = meta.steps;
    m["counters"] = {{"grad_V_evals", meta.counters.grad_V_evals},
                     {"V_evals", meta.counters.V_evals},
                     {"f_evals", meta.counters.f_evals},
                     {"df_ds_evals", meta.counters.df_ds_evals},
                     {"vector_field_evals", meta.counters.vector_field_evals},
                     {"a_map_evals", meta.counters.a_map_evals}};
    m["wall_time_s"] = meta.wall_time_s;
    if (!meta.message.empty()) m["message"] = meta.message;
    out << nlohmann::json{{"meta", m}}.dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& x : samples) {
    const auto v = sample_values(model, x, extras);
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_double(v[i]);
    out << '\n';
  }
  for (const auto& [k, v] : metadata_fields(meta)) out << "# " << k << '=' << v << '\n';
  if (!meta.message.empty()) out << "# message=" << meta.message << '\n';
}

void write_records(std::ostream& out, const std::string& format,
                   const std::vector<Record>& records) {
  if (records.empty()) return;
  if (format == "jsonl") {
    for (const auto& r : records) {
      nlohmann::json rec = nlohmann::json::object();
      for (const auto& [k, v] : r) {
        double num = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), num);
        const bool numeric = res.ec == std::errc() && res.ptr == v.data() + v.size();
        if (numeric) {
          rec[k] = json_number(num);
        } else {
          rec[k] = v;
        }
      }
      out << rec.dump() << '\n';
    }
    return;
  }
  const auto& head = records.front();
  for (std::size_t i = 0; i < head.size(); ++i) out << (i ? "," : "") << head[i].first;
  out << '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i].second;
    out << '\n';
  }
}

}  // namespace contact::cli
