#include "pst/run_record.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <tuple>

#include "pst/tridiag_eigen.hpp"

#ifndef PST_VERSION
#define PST_VERSION "0.0.0"
#endif

namespace pst {
namespace {

constexpr std::string_view kPrintedSuffix = "-printed";

template <class Scalar>
RunRecord finish(const RunRequest& request, const GapResult<Scalar>& gap, bool converged) {
  RunRecord record{request.spec};
  record.method = request.method;
  record.variant = request.variant;
  record.precision_tag = gap.precision;
  record.gap = gap.template cast<DoubleDouble>();
  record.converged = converged;
  record.tool_version = std::string(tool_version());
  record.rng_seed = request.seed;
  return record;
}

template <class Scalar>
RunRecord exact_record(const RunRequest& request) {
  return finish(request, top_gap(build_hamiltonian<Scalar>(request.spec)), true);
}

template <class Scalar>
RunRecord transcendental_record(const RunRequest& request) {
  const auto& s = request.spec;
  const auto sol = transcendental_gap<Scalar>(s.n_sites(), s.coupling(), s.boundary_field());
  return finish(request, sol.gap, sol.kappas.converged);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("malformed real '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("malformed integer '" + std::string(text) + "'");
  }
  return value;
}

std::optional<CsvReal> parse_real(std::string_view text, Precision precision) {
  if (text.empty()) return std::nullopt;
  if (precision == Precision::standard) return CsvReal(parse_double(text));
  try {
    return CsvReal(Decimal(std::string(text)));
  } catch (const std::exception&) {
    throw InvalidArgument("malformed decimal '" + std::string(text) + "'");
  }
}

std::string sanitize(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return out;
}

template <class T>
std::string optional_field(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, long long>) {
    return std::to_string(*v);
  } else {
    return format_real(*v);
  }
}

nlohmann::json json_real(const DoubleDouble& value, Precision precision) {
  if (precision == Precision::extended) return format_real(value, precision);
  return value.hi();
}

}  // namespace

std::string_view tool_version() { return PST_VERSION; }

GapMethod parse_method(std::string_view name) {
  if (name == "exact") return GapMethod::exact;
  if (name == "perturbative") return GapMethod::perturbative;
  if (name == "asymptotic") return GapMethod::asymptotic;
  if (name == "transcendental") return GapMethod::transcendental;
  if (name == "lowest-order" || name == "lowest_order") return GapMethod::lowest_order;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

Precision parse_precision(std::string_view name) {
  if (name == "standard") return Precision::standard;
  if (name == "extended") return Precision::extended;
  throw InvalidArgument("unknown precision '" + std::string(name) + "'");
}

LowestOrderVariant parse_variant(std::string_view name) {
  if (name == "squared") return LowestOrderVariant::squared;
  if (name == "printed" || name == "as_printed" || name == "as-printed") return LowestOrderVariant::as_printed;
  throw InvalidArgument("unknown variant '" + std::string(name) + "'");
}

std::string method_label(GapMethod method, LowestOrderVariant variant) {
  std::string label(to_string(method));
  if (method == GapMethod::lowest_order && variant == LowestOrderVariant::as_printed) label += kPrintedSuffix;
  return label;
}

RunRecord compute_record(const RunRequest& request) {
  const auto& s = request.spec;
  const bool extended = request.precision == Precision::extended;
  auto compute = [&]() -> RunRecord {
    switch (request.method) {
      case GapMethod::exact:
        return extended ? exact_record<DoubleDouble>(request) : exact_record<double>(request);
      case GapMethod::transcendental:
        s.require_uniform();
        return extended ? transcendental_record<DoubleDouble>(request) : transcendental_record<double>(request);
      case GapMethod::perturbative:
        s.require_uniform();
        return finish(request, perturbative_gap(s.n_sites(), s.coupling(), s.boundary_field()), true);
      case GapMethod::asymptotic:
        s.require_uniform();
        return finish(request, asymptotic_gap(s.n_sites(), s.coupling(), s.boundary_field()), true);
      case GapMethod::lowest_order:
        s.require_uniform();
        return finish(request,
                      lowest_order_gap(s.n_sites(), s.coupling(), s.boundary_field(), request.variant), true);
    }
    throw InvalidArgument("unhandled method");
  };
  RunRecord record = compute();
  if (request.with_peak) {
    record.fidelity_peak =
        detect_transfer_time(s, to_double(record.gap->transfer_time), request.window, request.seed);
  }
  return record;
}

RunRecord compute_record_or_error(const RunRequest& request) {
  try {
    return compute_record(request);
  } catch (const Error& e) {
    RunRecord record{request.spec};
    record.method = request.method;
    record.variant = request.variant;
    record.precision_tag = request.precision;
    record.converged = false;
    record.error = e.what();
    record.tool_version = std::string(tool_version());
    record.rng_seed = request.seed;
    return record;
  }
}

nlohmann::json to_json(const RunRecord& record) {
  using nlohmann::json;
  json spec = {{"n_sites", record.spec.n_sites()},
               {"coupling", record.spec.coupling()},
               {"boundary_field", record.spec.boundary_field()},
               {"bond_couplings", nullptr}};
  if (record.spec.bond_couplings()) spec["bond_couplings"] = *record.spec.bond_couplings();

  json gap = nullptr;
  if (record.gap) {
    const auto& g = *record.gap;
    gap = {{"e_plus", json_real(g.e_plus, g.precision)},
           {"e_minus", json_real(g.e_minus, g.precision)},
           {"splitting", json_real(g.splitting, g.precision)},
           {"transfer_time", json_real(g.transfer_time, g.precision)},
           {"transfer_time_rounded", g.rounded_transfer_time()},
           {"method", to_string(g.method)}};
  }
  json peak = nullptr;
  if (record.fidelity_peak) {
    peak = {{"time", record.fidelity_peak->time},
            {"value", record.fidelity_peak->fidelity},
            {"raw_value", record.fidelity_peak->raw_fidelity},
            {"smoothing_width", record.fidelity_peak->smoothing_width}};
  }
  json out = {{"spec", spec},
              {"method", method_label(record.method, record.variant)},
              {"gap", gap},
              {"fidelity_peak", peak},
              {"precision_tag", to_string(record.precision_tag)},
              {"converged", record.converged},
              {"tool_version", record.tool_version},
              {"rng_seed", record.rng_seed}};
  if (!record.error.empty()) out["error"] = record.error;
  return out;
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 16);
  return std::string(buf, ptr);
}

std::string format_real(const Decimal& value) { return value.str(31, std::ios_base::scientific); }

std::string format_real(const CsvReal& value) {
  return std::visit([](const auto& v) { return format_real(v); }, value);
}

Decimal to_decimal(const DoubleDouble& value) { return Decimal(value.hi()) + Decimal(value.lo()); }

std::string format_real(const DoubleDouble& value, Precision precision) {
  if (precision == Precision::standard || !std::isfinite(value.hi())) return format_real(value.hi());
  return format_real(to_decimal(value));
}

CsvRow to_csv_row(const RunRecord& record) {
  CsvRow row;
  row.n_sites = record.spec.n_sites();
  row.coupling = record.spec.coupling();
  row.field = record.spec.boundary_field();
  row.method = method_label(record.method, record.variant);
  row.precision = record.precision_tag;
  if (record.gap) {
    const auto& g = *record.gap;
    auto real = [&](const DoubleDouble& v) -> CsvReal {
      if (g.precision == Precision::extended && std::isfinite(v.hi())) return to_decimal(v);
      return v.hi();
    };
    row.e_plus = real(g.e_plus);
    row.e_minus = real(g.e_minus);
    row.splitting = real(g.splitting);
    row.transfer_time = real(g.transfer_time);
    if (std::isfinite(g.transfer_time.hi())) row.transfer_time_rounded = g.rounded_transfer_time();
  }
  if (record.fidelity_peak) row.peak_fidelity = record.fidelity_peak->fidelity;
  row.converged = record.converged;
  row.error = sanitize(record.error);
  return row;
}

std::string format_csv(const std::vector<CsvRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.n_sites);
    out += ',' + format_real(r.coupling);
    out += ',' + format_real(r.field);
    out += ',' + r.method;
    out += ',' + std::string(to_string(r.precision));
    out += ',' + optional_field(r.e_plus);
    out += ',' + optional_field(r.e_minus);
    out += ',' + optional_field(r.splitting);
    out += ',' + optional_field(r.transfer_time);
    out += ',' + optional_field(r.transfer_time_rounded);
    out += ',' + optional_field(r.peak_fidelity);
    out += r.converged ? ",true" : ",false";
    out += ',' + sanitize(r.error);
    out += '\n';
  }
  return out;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kCsvHeader) throw InvalidArgument("missing or unexpected CSV header");
  const std::size_t columns = split(kCsvHeader, ',').size();

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != columns) {
      throw InvalidArgument("CSV line " + std::to_string(i + 1) + " has " + std::to_string(f.size()) +
                            " fields, expected " + std::to_string(columns));
    }
    CsvRow r;
    r.n_sites = static_cast<int>(parse_integer(f[0]));
    r.coupling = parse_double(f[1]);
    r.field = parse_double(f[2]);
    r.method = std::string(f[3]);
    r.precision = parse_precision(f[4]);
    r.e_plus = parse_real(f[5], r.precision);
    r.e_minus = parse_real(f[6], r.precision);
    r.splitting = parse_real(f[7], r.precision);
    r.transfer_time = parse_real(f[8], r.precision);
    if (!f[9].empty()) r.transfer_time_rounded = parse_integer(f[9]);
    if (!f[10].empty()) r.peak_fidelity = parse_double(f[10]);
    if (f[11] == "true") {
      r.converged = true;
    } else if (f[11] != "false") {
      throw InvalidArgument("converged must be true or false");
    }
    r.error = std::string(f[12]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void sort_records(std::vector<RunRecord>& records) {
  auto key = [](const RunRecord& r) {
    return std::make_tuple(r.spec.n_sites(), r.spec.boundary_field(), method_label(r.method, r.variant),
                           static_cast<int>(r.precision_tag));
  };
  std::stable_sort(records.begin(), records.end(),
                   [&](const RunRecord& a, const RunRecord& b) { return key(a) < key(b); });
}

}  // namespace pst
