#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <nlohmann/json.hpp>

#include "pst/analytics.hpp"
#include "pst/chain_model.hpp"
#include "pst/dynamics.hpp"
#include "pst/gap_result.hpp"

namespace pst {

std::string_view tool_version();

GapMethod parse_method(std::string_view name);
Precision parse_precision(std::string_view name);
LowestOrderVariant parse_variant(std::string_view name);

/// Method label used in records: the method name, with "-printed" appended for
/// the as-printed lowest-order variant.
std::string method_label(GapMethod method, LowestOrderVariant variant);

struct RunRequest {
  ChainSpec spec;
  GapMethod method = GapMethod::exact;
  Precision precision = Precision::standard;
  LowestOrderVariant variant = LowestOrderVariant::squared;
  std::uint64_t seed = kDefaultSeed;
  bool with_peak = false;
  double window = 0.5;
};

/// Self-describing result of one computation.
struct RunRecord {
  explicit RunRecord(ChainSpec s) : spec(std::move(s)) {}

  ChainSpec spec;
  GapMethod method = GapMethod::exact;
  LowestOrderVariant variant = LowestOrderVariant::squared;
  Precision precision_tag = Precision::standard;
  std::optional<GapResult<DoubleDouble>> gap;
  std::optional<TransferPeak> fidelity_peak;
  bool converged = false;
  std::string error;  ///< empty on success
  std::string tool_version;
  std::uint64_t rng_seed = kDefaultSeed;
};

/// Runs one request. Propagates library errors.
RunRecord compute_record(const RunRequest& request);

/// As compute_record, but a failure becomes a record with `error` set.
RunRecord compute_record_or_error(const RunRequest& request);

/// One object per record; extended-precision reals are emitted as decimal
/// strings with 32 significant digits.
nlohmann::json to_json(const RunRecord& record);

using Decimal = boost::multiprecision::cpp_dec_float_50;

/// A CSV real: double (17 significant digits) or an exact decimal
/// (32 significant digits) for extended-precision columns.
using CsvReal = std::variant<double, Decimal>;

struct CsvRow {
  int n_sites = 0;
  double coupling = 0.0;
  double field = 0.0;
  std::string method;
  Precision precision = Precision::standard;
  std::optional<CsvReal> e_plus;
  std::optional<CsvReal> e_minus;
  std::optional<CsvReal> splitting;
  std::optional<CsvReal> transfer_time;
  std::optional<long long> transfer_time_rounded;
  std::optional<double> peak_fidelity;
  bool converged = false;
  std::string error;
};

inline constexpr std::string_view kCsvHeader =
    "n_sites,coupling,field,method,precision,e_plus,e_minus,splitting,transfer_time,"
    "transfer_time_rounded,peak_fidelity,converged,error";

std::string format_real(double value);
std::string format_real(const Decimal& value);
std::string format_real(const CsvReal& value);
std::string format_real(const DoubleDouble& value, Precision precision);

Decimal to_decimal(const DoubleDouble& value);

CsvRow to_csv_row(const RunRecord& record);

/// Header line plus one line per row, each terminated by '\n'.
std::string format_csv(const std::vector<CsvRow>& rows);

/// Inverse of format_csv. Throws InvalidArgument on malformed input.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Sorts records by (N, h, method label, precision).
void sort_records(std::vector<RunRecord>& records);

}  // namespace pst
