#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twm/afe.hpp"
#include "twm/mollifier.hpp"
#include "twm/moments.hpp"

namespace twm {

/// An ordered set of named fields; emission order is insertion order, so output is byte-stable.
class Record {
 public:
  Record& add(std::string key, std::string value);
  Record& add(std::string key, const char* value);
  Record& add(std::string key, double value);
  Record& add(std::string key, int value);
  Record& add(std::string key, std::int64_t value);
  Record& add(std::string key, std::uint64_t value);
  Record& add(std::string key, bool value);
  Record& add(std::string key, std::complex<double> value);
  Record& add(std::string key, Record value);               // nested object
  Record& add(std::string key, std::vector<Record> value);  // array of objects
  Record& extend(const Record& other);                      // append other's fields

  struct Field;
  const std::vector<Field>& fields() const { return fields_; }

 private:
  std::vector<Field> fields_;
};

struct Record::Field {
  std::string key;
  std::variant<std::string, double, std::int64_t, std::uint64_t, bool, std::complex<double>, std::vector<Record>>
      value;
  bool object = false;  // a single nested Record stored as a one-element vector
};

/// "%.17g"; non-finite values become null (JSON) or nan/inf (CSV).
std::string format_double(double x);

/// Complex numbers are {"re": .., "im": ..}.
std::string to_json(const Record& record);
/// Nested objects flatten to prefix_key, complex values to key_re/key_im; header is the union of
/// columns in first-seen order; missing cells are empty.
std::string to_csv(const std::vector<Record>& rows);

struct Provenance {
  std::uint64_t coefficient_limit = 0;
  double quadrature_step = 0.0;
};
/// The git-style identifier baked in at configure time.
const char* build_id();
Record provenance_record(const Provenance& p);

Record to_record(const LValueResult& r);
Record to_record(const ConditionFlags& c);
Record to_record(const MomentReport& r);
/// status column first; report fields follow when the row succeeded.
Record to_record(const ScanRow& row);
Record to_record(const KthMoment& m);
Record to_record(const MollifierSpec& spec);
Record to_record(const MollifiedFirstMoment& m);

}  // namespace twm
