#include "gaussmax/commands.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "gaussmax/ar1.hpp"
#include "gaussmax/corrmat.hpp"
#include "gaussmax/error.hpp"
#include "gaussmax/moments.hpp"
#include "gaussmax/oracle.hpp"

namespace gaussmax::cli {
namespace {

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17 significant digits round-trips any double.
std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

class JsonObject {
 public:
  JsonObject& number(std::string_view key, double v) { return raw(key, num(v)); }
  JsonObject& integer(std::string_view key, long long v) { return raw(key, std::to_string(v)); }
  JsonObject& unsigned_integer(std::string_view key, unsigned long long v) {
    return raw(key, std::to_string(v));
  }
  JsonObject& text(std::string_view key, std::string_view v) {
    return raw(key, fmt::format("\"{}\"", v));
  }
  JsonObject& boolean(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
  JsonObject& raw(std::string_view key, std::string_view v) {
    fields_.emplace_back(std::string(key), std::string(v));
    return *this;
  }
  [[nodiscard]] std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      s += fmt::format("{}\"{}\":{}", i ? "," : "", fields_[i].first, fields_[i].second);
    }
    return s + "}";
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

MomentTarget parse_target(const std::string& s) {
  return s == "mean" ? MomentTarget::Mean : MomentTarget::SecondMoment;
}

struct MomentsArgs {
  std::optional<int> ell;
  std::optional<double> rho;
  std::optional<std::string> matrix;
  std::string format = "csv";
};

int cmd_moments(const MomentsArgs& a, std::ostream& out) {
  if (a.rho.has_value() == a.matrix.has_value()) {
    throw UsageFailure("moments: give exactly one of --rho or --matrix");
  }
  MomentResult m;
  if (a.matrix) {
    std::ifstream in(*a.matrix);
    if (!in) throw IoFailure("cannot open matrix file '" + *a.matrix + "'");
    const auto r = read_correlation_matrix(in);
    if (a.ell && static_cast<std::size_t>(*a.ell) != r.dim()) {
      throw UsageFailure(fmt::format("--ell {} does not match the {}x{} matrix in '{}'", *a.ell,
                                     r.dim(), r.dim(), *a.matrix));
    }
    m.ell = static_cast<int>(r.dim());
    m.second_moment = second_moment_max(r);
    if (m.ell <= kMaxMeanEll) {
      m.mean = mean_max(r);
      m.variance = m.second_moment - *m.mean * *m.mean;
    }
  } else {
    if (!a.ell) throw UsageFailure("moments: --ell is required with --rho");
    m = moments_ar1(*a.rho, *a.ell);
  }

  if (a.format == "json") {
    JsonObject j;
    j.integer("ell", m.ell).text("method", to_string(m.method));
    if (a.rho) j.number("rho", *a.rho);
    if (m.mean) j.number("mean", *m.mean);
    j.number("second_moment", m.second_moment);
    if (m.variance) j.number("variance", *m.variance);
    out << j.str() << '\n';
  } else {
    out << "ell,method,mean,second_moment,variance\n";
    out << m.ell << ',' << to_string(m.method) << ',' << num(m.mean) << ','
        << num(m.second_moment) << ',' << num(m.variance) << '\n';
  }
  return kOk;
}

struct SweepArgs {
  int ell = 0;
  double min = 0.0;
  double max = 0.0;
  double step = 0.0;
  std::optional<std::string> out;
};

void write_sweep(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "rho,ell,mean,second_moment,variance\n";
  for (const auto& r : rows) {
    out << num(r.rho) << ',' << r.ell << ',' << num(r.mean) << ',' << num(r.second_moment) << ','
        << num(r.variance) << '\n';
  }
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const auto rows = sweep(a.ell, a.min, a.max, a.step);
  if (!a.out) {
    write_sweep(rows, out);
    return kOk;
  }
  std::ofstream file(*a.out);
  if (!file) throw IoFailure("cannot open '" + *a.out + "' for writing");
  write_sweep(rows, file);
  file.flush();
  if (!file) throw IoFailure("write to '" + *a.out + "' failed");
  return kOk;
}

struct MaximizeArgs {
  int ell = 0;
  std::string target = "mean";
  std::string format = "csv";
};

int cmd_maximize(const MaximizeArgs& a, std::ostream& out) {
  const auto target = parse_target(a.target);
  if (target == MomentTarget::Mean && a.ell > kMaxMeanEll) {
    throw Error(ErrorCode::UnsupportedDimension,
                fmt::format("E(M) for ell={} needs orthant probabilities of dimension >= 4, which "
                            "have no elementary closed form; the mean is supported for ell <= 5",
                            a.ell));
  }
  const auto r = maximize(a.ell, target);
  if (a.format == "json") {
    out << JsonObject()
               .integer("ell", r.ell)
               .text("target", to_string(r.target))
               .number("rho_star", r.rho_star)
               .number("value", r.value)
               .integer("evaluations", r.evaluations)
               .str()
        << '\n';
  } else {
    out << "ell,target,rho_star,value,evaluations\n";
    out << r.ell << ',' << to_string(r.target) << ',' << num(r.rho_star) << ',' << num(r.value)
        << ',' << r.evaluations << '\n';
  }
  return kOk;
}

struct VerifyArgs {
  int ell = 0;
  double rho = 0.0;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string format = "csv";
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto analytic = moments_ar1(a.rho, a.ell);
  const auto matrix = ar1_matrix(Ar1Parameter(a.rho), a.ell);
  const auto mc = oracle::sample_max_moments(matrix, a.samples, a.seed, a.threads);

  struct Line {
    std::string_view name;
    double analytic;
    double estimate;
    double se;
    double z;
  };
  std::vector<Line> lines;
  auto add = [&](std::string_view name, double exact, double estimate, double se) {
    lines.push_back(Line{name, exact, estimate, se, (estimate - exact) / se});
  };
  if (analytic.mean) add("mean", *analytic.mean, mc.mean, mc.se_mean);
  add("second_moment", analytic.second_moment, mc.second_moment, mc.se_second);
  if (analytic.variance) add("variance", *analytic.variance, mc.variance, mc.se_variance);

  bool pass = true;
  for (const auto& l : lines) pass = pass && std::abs(l.z) <= 3.0;

  if (a.format == "json") {
    std::string items = "[";
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& l = lines[i];
      items += (i ? "," : "") + JsonObject()
                                    .text("quantity", l.name)
                                    .number("analytic", l.analytic)
                                    .number("monte_carlo", l.estimate)
                                    .number("standard_error", l.se)
                                    .number("z_score", l.z)
                                    .str();
    }
    items += "]";
    out << JsonObject()
               .integer("ell", a.ell)
               .number("rho", a.rho)
               .unsigned_integer("samples", a.samples)
               .unsigned_integer("seed", a.seed)
               .text("rng", oracle::kRandomStreamId)
               .raw("quantities", items)
               .boolean("pass", pass)
               .str()
        << '\n';
  } else {
    out << "quantity,analytic,monte_carlo,standard_error,z_score\n";
    for (const auto& l : lines) {
      out << l.name << ',' << num(l.analytic) << ',' << num(l.estimate) << ',' << num(l.se) << ','
          << num(l.z) << '\n';
    }
  }
  return pass ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moments of the maximum of a correlated Gaussian vector and of AR(1) segments"};
  app.name(args.empty() ? "gaussmax" : args.front());
  app.require_subcommand(1);

  MomentsArgs moments_args;
  auto* moments = app.add_subcommand("moments", "E(M), E(M^2) and V(M) for an AR(1) segment or a matrix");
  moments->add_option("--ell", moments_args.ell, "segment length / dimension")->check(CLI::Range(2, 64));
  auto* rho_opt = moments->add_option("--rho", moments_args.rho, "lag-one correlation, |rho| < 1");
  auto* matrix_opt = moments->add_option("--matrix", moments_args.matrix, "correlation matrix file");
  rho_opt->excludes(matrix_opt);
  moments->add_option("--format", moments_args.format)->check(CLI::IsMember({"csv", "json"}));

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "moments over a grid of rho as CSV");
  sweep_cmd->add_option("--ell", sweep_args.ell)->required();
  sweep_cmd->add_option("--min", sweep_args.min)->required();
  sweep_cmd->add_option("--max", sweep_args.max)->required();
  sweep_cmd->add_option("--step", sweep_args.step)->required();
  sweep_cmd->add_option("--out", sweep_args.out, "output file (default: stdout)");

  MaximizeArgs max_args;
  auto* max_cmd = app.add_subcommand("maximize", "rho maximizing E(M) or E(M^2)");
  max_cmd->add_option("--ell", max_args.ell)->required();
  max_cmd->add_option("--target", max_args.target)
      ->check(CLI::IsMember({"mean", "second", "second_moment"}));
  max_cmd->add_option("--format", max_args.format)->check(CLI::IsMember({"csv", "json"}));

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "compare analytic moments with Monte Carlo");
  verify_cmd->add_option("--ell", verify_args.ell)->required();
  verify_cmd->add_option("--rho", verify_args.rho)->required();
  verify_cmd->add_option("--samples", verify_args.samples)
      ->check(CLI::Range(oracle::kMinSamples, std::size_t{1} << 40));
  verify_cmd->add_option("--seed", verify_args.seed);
  verify_cmd->add_option("--threads", verify_args.threads, "worker threads (0 = all cores)");
  verify_cmd->add_option("--format", verify_args.format)->check(CLI::IsMember({"csv", "json"}));

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*moments) return cmd_moments(moments_args, out);
    if (*sweep_cmd) return cmd_sweep(sweep_args, out);
    if (*max_cmd) return cmd_maximize(max_args, out);
    return cmd_verify(verify_args, out);
  } catch (const UsageFailure& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace gaussmax::cli
