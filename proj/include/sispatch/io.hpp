#ifndef SISPATCH_IO_HPP
#define SISPATCH_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "sispatch/model.hpp"

namespace sispatch {

/// Scenario description as read from a JSON config file. Unknown fields are
/// rejected so parameter-name typos cannot silently corrupt results.
struct ScenarioConfig {
    int n = 0;
    Matrix L;
    Vector beta;
    Vector gamma;
    double dS = 0.0;
    double dI = 0.0;
    double N = 0.0;
    std::optional<Vector> S0;
    std::optional<Vector> I0;
    double tol_rel = 1e-8;
    double tol_abs = 1e-10;
    long seed = 0;
};

/// Parses and validates config JSON; throws Error(BadConfig) on any violation.
ScenarioConfig parse_scenario_config(const std::string& text);

/// Builds the validated Model (connectivity checks included).
Model model_from_config(const ScenarioConfig& cfg);

/// Shortest-faithful decimal rendering of a double (17 significant digits).
std::string format_double(double x);

/// Streaming JSON writer with deterministic formatting. Keys are emitted in
/// call order; numbers use 17 significant digits.
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(double x);
    JsonWriter& value(long x);
    JsonWriter& value(int x) { return value(static_cast<long>(x)); }
    JsonWriter& value(bool b);
    JsonWriter& value(const std::string& s);
    JsonWriter& value(const char* s) { return value(std::string(s)); }
    JsonWriter& value(const Vector& v);
    JsonWriter& null_value();

    const std::string& str() const { return out_; }

  private:
    void comma();
    std::string out_;
    std::vector<bool> need_comma_;
    bool after_key_ = false;
};

/// One CSV row; fields are joined with commas and no locale formatting.
std::string csv_row(const std::vector<std::string>& fields);

} // namespace sispatch

#endif
