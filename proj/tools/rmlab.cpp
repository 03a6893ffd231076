// rmlab: command-line front end for the Riesz-Morrey toolkit.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rmlab/rmlab.hpp"

namespace {

std::optional<double> parse_exponent(const std::string& flag, const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "inf" || s == "infinity") return rmlab::kInf;
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw rmlab::InputError("flag --" + flag + " expects a number or 'inf', got '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riesz-Morrey norm toolkit"};
  app.require_subcommand(1);

  std::string p_s, q_s, alpha_s, domain, config_path, output, function, cert_csv, trace_csv;
  std::optional<int> n, depth, grid, K, N, parts, samples;
  std::optional<std::uint64_t> seed;
  std::vector<double> offsets, root;
  std::vector<long> L_list, K_list;

  app.add_option("--p", p_s, "exponent p in [1, inf]");
  app.add_option("--q", q_s, "exponent q in [1, inf]");
  app.add_option("--alpha", alpha_s, "exponent alpha");
  app.add_option("--domain", domain, "rn or cube")->check(CLI::IsMember({"rn", "cube"}));
  app.add_option("--n", n, "dimension");
  app.add_option("--depth", depth, "dyadic or construction depth");
  app.add_option("--grid", grid, "grid cells or dyadic level for probes");
  app.add_option("--offsets", offsets, "diagonal root shifts as fractions of the side")->delimiter(',');
  app.add_option("--K", K, "shell count");
  app.add_option("--K-list", K_list, "sample points for growth fits")->delimiter(',');
  app.add_option("--L", L_list, "sparse truncations")->delimiter(',');
  app.add_option("--N", N, "ring subdivision N for the power construction");
  app.add_option("--parts", parts, "intervals per shell side");
  app.add_option("--samples", samples, "random samples per probe");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--root", root, "root cube as lower_0,...,lower_{n-1},side")->delimiter(',');
  app.add_option("--function", function, "step function JSON for norm");
  app.add_option("--config", config_path, "JSON config file mirroring the flags");
  app.add_option("-o,--output", output, "output path (stdout when omitted)");
  app.add_option("--certificate-csv", cert_csv, "write the certificate family as CSV");
  app.add_option("--trace-csv", trace_csv, "write the trace as CSV");

  std::string target;
  const std::pair<const char*, const char*> commands[] = {
      {"construct", "build a named step function and write it as JSON"},
      {"norm", "dyadic lower bound for the norm of a step function"},
      {"verify", "run one probe, or all of them"},
      {"classify", "identify the space for given p, q, alpha"},
      {"sweep", "write the classification grid as CSV"},
  };
  for (const auto& [name, about] : commands) {
    auto* sub = app.add_subcommand(name, about);
    sub->fallthrough();
    if (std::string(name) == "construct") {
      sub->add_option("target", target, "tree | sparse | shell | power")->required();
    } else if (std::string(name) == "verify") {
      sub->add_option("target", target, "probe name or 'all'");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rmlab::kExitConfig;
  }

  rmlab::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = rmlab::config_from_json(rmlab::read_json_file(config_path));
    cfg.command = app.get_subcommands().front()->get_name();
    if (!target.empty()) cfg.target = target;
    if (auto v = parse_exponent("p", p_s)) cfg.p = v;
    if (auto v = parse_exponent("q", q_s)) cfg.q = v;
    if (auto v = parse_exponent("alpha", alpha_s)) cfg.alpha = v;
    if (!domain.empty()) cfg.domain = domain;
    if (n) cfg.n = *n;
    if (depth) cfg.depth = depth;
    if (grid) cfg.grid = grid;
    if (!offsets.empty()) cfg.offsets = offsets;
    if (K) cfg.K = K;
    if (!K_list.empty()) cfg.K_list = K_list;
    if (!L_list.empty()) cfg.L_list = L_list;
    if (N) cfg.N = N;
    if (parts) cfg.parts = parts;
    if (samples) cfg.samples = samples;
    if (seed) cfg.seed = *seed;
    if (!root.empty()) {
      if (root.size() < 2) throw rmlab::InputError("flag --root needs the lower corner followed by the side");
      cfg.root_side = root.back();
      root.pop_back();
      cfg.root_lower = root;
    }
    if (!function.empty()) cfg.function_path = function;
    if (!output.empty()) cfg.output_path = output;
    if (!cert_csv.empty()) cfg.certificate_csv = cert_csv;
    if (!trace_csv.empty()) cfg.trace_csv = trace_csv;
  } catch (const rmlab::Error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return rmlab::kExitConfig;
  }
  return rmlab::run(cfg, std::cout, std::cerr);
}
