#include "twm/report.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>

#ifndef TWM_BUILD_ID
#define TWM_BUILD_ID "unknown"
#endif

namespace twm {

Record& Record::add(std::string key, std::string value) {
  fields_.push_back({std::move(key), std::move(value)});
  return *this;
}
Record& Record::add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }
Record& Record::add(std::string key, double value) {
  fields_.push_back({std::move(key), value});
  return *this;
}
Record& Record::add(std::string key, int value) { return add(std::move(key), static_cast<std::int64_t>(value)); }
Record& Record::add(std::string key, std::int64_t value) {
  fields_.push_back({std::move(key), value});
  return *this;
}
Record& Record::add(std::string key, std::uint64_t value) {
  fields_.push_back({std::move(key), value});
  return *this;
}
Record& Record::add(std::string key, bool value) {
  fields_.push_back({std::move(key), value});
  return *this;
}
Record& Record::add(std::string key, std::complex<double> value) {
  fields_.push_back({std::move(key), value});
  return *this;
}
Record& Record::add(std::string key, Record value) {
  fields_.push_back({std::move(key), std::vector<Record>{std::move(value)}, true});
  return *this;
}
Record& Record::add(std::string key, std::vector<Record> value) {
  fields_.push_back({std::move(key), std::move(value)});
  return *this;
}

Record& Record::extend(const Record& other) {
  fields_.insert(fields_.end(), other.fields_.begin(), other.fields_.end());
  return *this;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // no "-0" from the conjugate heights
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string json_number(double x) { return std::isfinite(x) ? format_double(x) : "null"; }

void write_json(const Record& r, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  out += "{";
  bool first = true;
  for (const auto& f : r.fields()) {
    out += first ? "\n" : ",\n";
    first = false;
    out += pad + quoted(f.key) + ": ";
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, std::string>) {
            out += quoted(v);
          } else if constexpr (std::is_same_v<V, double>) {
            out += json_number(v);
          } else if constexpr (std::is_same_v<V, bool>) {
            out += v ? "true" : "false";
          } else if constexpr (std::is_same_v<V, std::complex<double>>) {
            out += "{\"re\": " + json_number(v.real()) + ", \"im\": " + json_number(v.imag()) + "}";
          } else if constexpr (std::is_same_v<V, std::vector<Record>>) {
            if (f.object) {
              write_json(v.front(), depth + 1, out);
            } else {
              out += "[";
              for (std::size_t i = 0; i < v.size(); ++i) {
                out += i ? ",\n" : "\n";
                out += pad + "  ";
                write_json(v[i], depth + 2, out);
              }
              out += v.empty() ? "]" : "\n" + pad + "]";
            }
          } else {
            out += std::to_string(v);
          }
        },
        f.value);
  }
  out += first ? "}" : "\n" + std::string(2 * depth, ' ') + "}";
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void flatten(const Record& r, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& f : r.fields()) {
    const std::string key = prefix.empty() ? f.key : prefix + "_" + f.key;
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, std::string>) {
            out.emplace_back(key, csv_cell(v));
          } else if constexpr (std::is_same_v<V, double>) {
            out.emplace_back(key, format_double(v));
          } else if constexpr (std::is_same_v<V, bool>) {
            out.emplace_back(key, v ? "true" : "false");
          } else if constexpr (std::is_same_v<V, std::complex<double>>) {
            out.emplace_back(key + "_re", format_double(v.real()));
            out.emplace_back(key + "_im", format_double(v.imag()));
          } else if constexpr (std::is_same_v<V, std::vector<Record>>) {
            for (std::size_t i = 0; i < v.size(); ++i)
              flatten(v[i], f.object ? key : key + "_" + std::to_string(i), out);
          } else {
            out.emplace_back(key, std::to_string(v));
          }
        },
        f.value);
  }
}

}  // namespace

std::string to_json(const Record& record) {
  std::string out;
  write_json(record, 0, out);
  return out + "\n";
}

std::string to_csv(const std::vector<Record>& rows) {
  std::vector<std::vector<std::pair<std::string, std::string>>> flat(rows.size());
  std::vector<std::string> header;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    flatten(rows[i], "", flat[i]);
    for (const auto& [key, _] : flat[i])
      if (std::find(header.begin(), header.end(), key) == header.end()) header.push_back(key);
  }
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += "\n";
  for (const auto& row : flat) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c) out += ",";
      for (const auto& [key, cell] : row)
        if (key == header[c]) {
          out += cell;
          break;
        }
    }
    out += "\n";
  }
  return out;
}

const char* build_id() { return TWM_BUILD_ID; }

Record provenance_record(const Provenance& p) {
  Record r;
  r.add("coefficient_limit", p.coefficient_limit).add("quadrature_step", p.quadrature_step).add("build_id", build_id());
  return r;
}

Record to_record(const LValueResult& r) {
  Record out;
  out.add("s", r.s)
      .add("character", static_cast<std::uint64_t>(r.character))
      .add("value", r.value)
      .add("balance", r.balance)
      .add("length_direct", r.length_direct)
      .add("length_dual", r.length_dual)
      .add("certified_error", r.certified_error)
      .add("step_error", r.step_error)
      .add("accepted", r.accepted());
  return out;
}

Record to_record(const ConditionFlags& c) {
  Record out;
  out.add("q0", c.q0)
      .add("eta_i", c.eta_i)
      .add("epsilon0_i", c.epsilon0_i)
      .add("epsilon0_ii", c.epsilon0_ii)
      .add("condition_i", c.condition_i)
      .add("condition_ii", c.condition_ii)
      .add("error_scale_R", c.error_scale_R);
  return out;
}

Record to_record(const MomentReport& r) {
  Record out;
  out.add("q", r.q)
      .add("a", r.a)
      .add("b", r.b)
      .add("s1", r.s1)
      .add("s2", r.s2)
      .add("form", r.form)
      .add("euler_form", r.euler_form)
      .add("lhs", r.lhs)
      .add("main_term_1", r.main_term_1)
      .add("main_term_2", r.main_term_2)
      .add("main_sum", r.main_sum)
      .add("error_scale_R", r.error_scale_R)
      .add("residual", r.residual)
      .add("relative_residual", r.relative_residual)
      .add("interpretation", r.interpretation)
      .add("alternate_main_sum", r.alternate_main_sum)
      .add("alternate_relative_residual", r.alternate_relative_residual)
      .add("conditions", to_record(r.conditions))
      .add("phi_star", r.phi_star)
      .add("lhs_certified_error", r.lhs_certified_error)
      .add("length_1", r.length_1)
      .add("length_2", r.length_2)
      .add("derivative_certificate", r.derivative_certificate);
  return out;
}

Record to_record(const ScanRow& row) {
  Record out;
  out.add("status", row.status);
  if (row.report) {
    out.extend(to_record(*row.report));
  } else {
    out.add("q", row.q);
  }
  return out;
}

Record to_record(const KthMoment& m) {
  Record out;
  out.add("q", m.q)
      .add("t", m.t)
      .add("k", m.k)
      .add("sum", m.sum)
      .add("normalized", m.normalized)
      .add("phi_star", m.phi_star)
      .add("max_certified_error", m.max_certified_error);
  return out;
}

Record to_record(const MollifierSpec& spec) {
  Record out;
  out.add("q", spec.q).add("N", spec.N).add("M", spec.M).add("k", spec.k).add("c_k", spec.c_k);
  out.add("r_k", static_cast<std::uint64_t>(spec.r_k)).add("degenerate", spec.degenerate);
  std::vector<Record> blocks;
  for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
    Record b;
    std::string primes;
    for (const std::uint64_t p : spec.blocks[j]) primes += (primes.empty() ? "" : " ") + std::to_string(p);
    b.add("length", static_cast<std::uint64_t>(spec.lengths[j])).add("upper_exponent", spec.upper_exponents[j]);
    b.add("primes", primes);
    blocks.push_back(std::move(b));
  }
  out.add("blocks", std::move(blocks));
  return out;
}

Record to_record(const MollifiedFirstMoment& m) {
  Record out;
  out.add("lhs", m.lhs)
      .add("prediction", m.prediction)
      .add("relative_residual", m.relative_residual)
      .add("support_x", static_cast<std::uint64_t>(m.support_x))
      .add("support_y", static_cast<std::uint64_t>(m.support_y))
      .add("max_support", m.max_support)
      .add("max_coefficient", m.max_coefficient);
  return out;
}

}  // namespace twm
