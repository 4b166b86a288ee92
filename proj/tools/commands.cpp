#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "asc/asc.hpp"

namespace asc::cli {

using Json = nlohmann::ordered_json;

nlohmann::ordered_json RunManifest::to_json() const {
  Json j;
  j["command"] = command;
  j["n"] = n;
  j["params"] = params;
  j["seed"] = seed;
  j["count"] = count;
  j["outputs"] = outputs;
  j["version"] = version;
  return j;
}

std::string RunManifest::comment_line() const { return "# asc-manifest " + to_json().dump() + "\n"; }

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0' && p.is_relative()) {
    p = std::filesystem::path(dir) / p;
  }
  return p;
}

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_output(const std::string& path, std::vector<std::string>* written = nullptr) {
  const auto p = resolve_output(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  if (written) written->push_back(p.string());
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

void write_json(const std::string& path, const Json& j) {
  auto out = open_output(path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_trace_csv(std::ostream& out, std::span<const WalkTransition> trace,
                     std::span<const std::size_t> popcounts) {
  out << "step,direction,delta,u_forward,u_backward,ratio,accepted,displacement,popcount\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& t = trace[i];
    out << i + 1 << ',' << to_string(t.direction) << ',' << t.distance << ',' << t.forward_set_size << ','
        << t.backward_set_size << ',' << format_double(t.accept_ratio) << ',' << (t.accepted ? 1 : 0) << ','
        << t.signed_displacement << ',' << popcounts[i] << '\n';
  }
}

Json report_json(const AutocorrReport& r, const RunManifest& manifest) {
  Json j;
  j["observable"] = r.observable;
  j["mean"] = r.mean;
  j["gamma"] = r.gamma;
  j["Gamma"] = r.gamma_pairs;
  j["cutoff_lag"] = r.cutoff_lag;
  j["censored"] = r.censored;
  j["rejection_rate"] = r.rejection_rate;
  j["manifest"] = manifest.to_json();
  return j;
}

void write_series_csv(const std::string& path, const std::string& index_name,
                      std::span<const double> values, const RunManifest& manifest) {
  auto out = open_output(path);
  out << manifest.comment_line() << index_name << ",value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_double(values[i]) << '\n';
}

std::vector<std::size_t> default_checkpoints(std::size_t budget) {
  std::vector<std::size_t> cps;
  const std::size_t stride = std::max<std::size_t>(1, budget / 100);
  for (std::size_t c = stride; c < budget; c += stride) cps.push_back(c);
  cps.push_back(budget);
  return cps;
}

}  // namespace

LabeledComplex parse_start(const std::string& spec, int n) {
  if (spec == "corner") return corner_start(n);
  if (spec == "central") return central_start(n);
  if (spec.rfind("file:", 0) == 0) {
    auto in = open_input(spec.substr(5));
    LabeledComplex c = read_mask_text(in);
    if (c.vertex_count() != n) {
      throw std::invalid_argument("start state has n = " + std::to_string(c.vertex_count()) +
                                  " but --n is " + std::to_string(n));
    }
    require_closed(c);
    return c;
  }
  throw std::invalid_argument("start must be corner, central or file:PATH, got '" + spec + "'");
}

std::vector<WalkTransition> read_trace_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) header.push_back(cell);
    break;
  }
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (const char* name : {"direction", "delta", "u_forward", "u_backward", "ratio", "accepted", "displacement"}) {
    if (!column.count(name)) throw std::invalid_argument(std::string("trace is missing column '") + name + "'");
  }

  std::vector<WalkTransition> trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " fields");
    }
    try {
      WalkTransition t;
      const auto& dir = cells[column["direction"]];
      if (dir == "add") t.direction = Move::add;
      else if (dir == "remove") t.direction = Move::remove;
      else if (dir == "global") t.direction = Move::global;
      else throw std::invalid_argument("bad direction");
      t.distance = std::stoul(cells[column["delta"]]);
      t.forward_set_size = std::stoul(cells[column["u_forward"]]);
      t.backward_set_size = std::stoul(cells[column["u_backward"]]);
      t.accept_ratio = std::stod(cells[column["ratio"]]);
      t.accepted = cells[column["accepted"]] == "1";
      t.signed_displacement = std::stol(cells[column["displacement"]]);
      trace.push_back(t);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed trace line " + std::to_string(line_no) + ": " + line);
    }
  }
  if (trace.empty()) throw std::invalid_argument("trace has no transitions");
  return trace;
}

void cmd_sample(const SampleOptions& opt, std::ostream& log) {
  if (opt.algorithm != "balanced" && opt.algorithm != "kahle") {
    throw std::invalid_argument("algorithm must be balanced or kahle");
  }
  if (opt.count == 0) throw std::invalid_argument("count must be positive");
  KahleParams params = opt.p.empty() ? KahleParams::uniform(opt.n) : KahleParams{opt.n, opt.p};
  if (opt.algorithm == "kahle") params.validate();

  RunManifest manifest;
  manifest.command = "sample";
  manifest.n = opt.n;
  manifest.params["algorithm"] = opt.algorithm;
  if (opt.algorithm == "kahle") manifest.params["p"] = params.p;
  manifest.seed = opt.seed;
  manifest.count = opt.count;
  manifest.outputs.push_back(opt.out);
  if (!opt.logprob_out.empty()) manifest.outputs.push_back(opt.logprob_out);

  auto masks = open_output(opt.out);
  masks << manifest.comment_line() << opt.n << '\n';
  std::ofstream logprob;
  if (!opt.logprob_out.empty()) {
    logprob = open_output(opt.logprob_out);
    logprob << manifest.comment_line() << "index,log_prob\n";
  }

  Rng rng = make_stream(opt.seed);
  for (std::size_t i = 0; i < opt.count; ++i) {
    LabeledComplex c;
    double lp = 0.0;
    if (opt.algorithm == "balanced") {
      auto draw = balanced_sample(opt.n, rng);
      lp = draw.trace.log_prob();
      c = std::move(draw.state);
    } else {
      c = kahle_sample(params, rng);
      if (logprob.is_open()) lp = kahle_log_prob(c, params);
    }
    masks << c.to_string() << '\n';
    if (logprob.is_open()) logprob << i << ',' << format_double(lp) << '\n';
  }
  if (!masks) throw std::runtime_error("failed writing '" + opt.out + "'");
  log << manifest.to_json().dump(2) << "\n";
}

void cmd_walk(const WalkOptions& opt, std::ostream& log) {
  const Observable observable = parse_observable(opt.observable);
  if (opt.steps == 0) throw std::invalid_argument("steps must be positive");
  const WalkConfig cfg = WalkConfig::make(opt.n, opt.lambda);
  const LabeledComplex start = parse_start(opt.start, opt.n);

  RunManifest manifest;
  manifest.command = "walk";
  manifest.n = opt.n;
  manifest.params["start"] = opt.start;
  manifest.params["lambda"] = opt.lambda;
  manifest.params["observable"] = opt.observable;
  manifest.params["truncation_correction"] = cfg.truncation_correction;
  manifest.seed = opt.seed;
  manifest.count = opt.steps;
  manifest.outputs = {opt.out, opt.report};

  Rng rng = make_stream(opt.seed);
  std::vector<WalkTransition> trace;
  std::vector<std::size_t> popcounts;
  trace.reserve(opt.steps);
  popcounts.reserve(opt.steps);
  run_chain(start, cfg, opt.steps, rng, [&](std::size_t, const LabeledComplex& s, const WalkTransition& t) {
    if (!validate_closure(s)) throw std::logic_error("walk left the closed-state space");
    trace.push_back(t);
    popcounts.push_back(s.popcount());
  });

  auto out = open_output(opt.out);
  out << manifest.comment_line();
  write_trace_csv(out, trace, popcounts);
  if (!out) throw std::runtime_error("failed writing '" + opt.out + "'");

  const AutocorrReport report = analyze_trace(trace, observable);
  write_json(opt.report, report_json(report, manifest));
  log << "cutoff_lag=" << report.cutoff_lag << (report.censored ? " (censored)" : "")
      << " rejection_rate=" << format_double(report.rejection_rate) << "\n";
}

void cmd_enumerate(const EnumerateOptions& opt, std::ostream& log) {
  const EnumerationResult result = enumerate_labeled(opt.n, opt.allow_large);
  RunManifest manifest;
  manifest.command = "enumerate";
  manifest.n = opt.n;
  manifest.count = result.labeled_count();
  manifest.outputs = {opt.out, opt.summary};

  auto out = open_output(opt.out);
  out << manifest.comment_line() << opt.n << '\n';
  for (const auto& c : result.labeled_states) out << c.to_string() << '\n';
  if (!out) throw std::runtime_error("failed writing '" + opt.out + "'");

  Json summary;
  summary["n"] = opt.n;
  summary["labeled_count"] = result.labeled_count();
  summary["geometric_count"] = result.geometric_count();
  Json classes = Json::array();
  for (const auto& cls : result.geometric_classes) {
    classes.push_back(Json{{"key", cls.key.hex()}, {"size", cls.size}});
  }
  summary["classes"] = std::move(classes);
  summary["manifest"] = manifest.to_json();
  write_json(opt.summary, summary);
  log << "labeled_count=" << result.labeled_count() << " geometric_count=" << result.geometric_count() << "\n";
}

void cmd_bin(const BinOptions& opt, std::ostream& log) {
  auto in = open_input(opt.in);
  const auto samples = read_mask_stream(in);
  if (samples.empty()) throw std::invalid_argument("no samples in '" + opt.in + "'");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!validate_closure(samples[i])) {
      throw std::invalid_argument("sample " + std::to_string(i) + " violates closure");
    }
  }
  const GeometricBinner binner = bin_samples(samples);

  RunManifest manifest;
  manifest.command = "bin";
  manifest.n = samples.front().vertex_count();
  manifest.params["input"] = opt.in;
  manifest.count = samples.size();
  manifest.outputs = {opt.out, opt.residuals};

  auto out = open_output(opt.out);
  out << manifest.comment_line() << "key,multiplicity,orbit_size,first_seen_index\n";
  for (const auto& b : binner.bins()) {
    out << b.key.hex() << ',' << b.multiplicity << ',' << b.key.orbit_size << ',' << b.first_seen_index << '\n';
  }
  const auto counts = binner.multiplicities();
  write_series_csv(opt.residuals, "bin_index", multiplicity_residuals(counts), manifest);

  const auto uniformity = uniformity_test(counts);
  log << "bins=" << counts.size() << " chi_square=" << format_double(uniformity.chi_square)
      << " p_value=" << format_double(uniformity.p_value) << "\n";
}

void cmd_diagnose(const DiagnoseOptions& opt, std::ostream& log) {
  const Observable observable = parse_observable(opt.observable);
  auto in = open_input(opt.in);
  const auto trace = read_trace_csv(in);
  const AutocorrReport report = analyze_trace(trace, observable, opt.k_max);

  RunManifest manifest;
  manifest.command = "diagnose";
  manifest.params["input"] = opt.in;
  manifest.params["observable"] = opt.observable;
  manifest.params["k_max"] = report.gamma.size() - 1;
  manifest.count = trace.size();
  manifest.outputs = {opt.out};
  write_json(opt.out, report_json(report, manifest));
  log << "cutoff_lag=" << report.cutoff_lag << (report.censored ? " (censored)" : "")
      << " rejection_rate=" << format_double(report.rejection_rate) << "\n";
}

void cmd_compare(const CompareOptions& opt, std::ostream& log) {
  if (opt.budget == 0) throw std::invalid_argument("budget must be positive");
  const BreadthComparison cmp = compare_samplers(opt.n, opt.budget, opt.seed);
  const auto checkpoints = default_checkpoints(opt.budget);
  const auto walk_curve = cmp.walk.unique_curve(checkpoints);
  const auto balanced_curve = cmp.balanced.unique_curve(checkpoints);
  const auto kahle_curve = cmp.kahle.unique_curve(checkpoints);

  const std::filesystem::path dir(opt.out_dir);
  auto path = [&](const char* name) { return (dir / name).string(); };

  RunManifest manifest;
  manifest.command = "compare";
  manifest.n = opt.n;
  manifest.params["walk_start"] = "central";
  manifest.params["kahle_p"] = 0.5;
  manifest.seed = opt.seed;
  manifest.count = opt.budget;
  manifest.outputs = {path("curves.csv"), path("residuals_walk.csv"), path("residuals_balanced.csv"),
                      path("residuals_kahle.csv"), path("summary.json")};

  auto curves = open_output(path("curves.csv"));
  curves << manifest.comment_line() << "checkpoint,walk,balanced,kahle\n";
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    curves << checkpoints[i] << ',' << walk_curve[i] << ',' << balanced_curve[i] << ',' << kahle_curve[i] << '\n';
  }
  write_series_csv(path("residuals_walk.csv"), "bin_index", multiplicity_residuals(cmp.walk.bins.multiplicities()),
                   manifest);
  write_series_csv(path("residuals_balanced.csv"), "bin_index",
                   multiplicity_residuals(cmp.balanced.bins.multiplicities()), manifest);
  write_series_csv(path("residuals_kahle.csv"), "bin_index",
                   multiplicity_residuals(cmp.kahle.bins.multiplicities()), manifest);

  Json summary;
  summary["unique_states"] = {{"walk", cmp.walk.bins.bins().size()},
                              {"balanced", cmp.balanced.bins.bins().size()},
                              {"kahle", cmp.kahle.bins.bins().size()}};
  summary["walk_steps"] = cmp.walk_steps;
  summary["walk_rejection_rate"] = cmp.walk_rejection_rate;
  summary["manifest"] = manifest.to_json();
  write_json(path("summary.json"), summary);
  log << "unique states: walk=" << cmp.walk.bins.bins().size() << " balanced=" << cmp.balanced.bins.bins().size()
      << " kahle=" << cmp.kahle.bins.bins().size() << "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampling and analysis of abstract simplicial complexes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw states from the balanced or Kahle sampler");
  sample_cmd->add_option("--n", sample.n, "Vertex count")->required();
  sample_cmd->add_option("--algorithm", sample.algorithm, "balanced or kahle")
      ->check(CLI::IsMember({"balanced", "kahle"}));
  sample_cmd->add_option("--p", sample.p, "Kahle level probabilities p_2..p_n (default all 0.5)")->delimiter(',');
  sample_cmd->add_option("--count", sample.count, "Number of samples");
  sample_cmd->add_option("--seed", sample.seed, "Random seed");
  sample_cmd->add_option("--out", sample.out, "Mask stream output");
  sample_cmd->add_option("--logprob", sample.logprob_out, "Per-sample log-probability CSV");

  WalkOptions walk;
  auto* walk_cmd = app.add_subcommand("walk", "Run the local random walk and report autocorrelation");
  walk_cmd->add_option("--n", walk.n, "Vertex count")->required();
  walk_cmd->add_option("--steps", walk.steps, "Chain steps");
  walk_cmd->add_option("--start", walk.start, "corner, central or file:PATH");
  walk_cmd->add_option("--lambda", walk.lambda, "Probability of a local step (1 = pure local walk)");
  walk_cmd->add_option("--seed", walk.seed, "Random seed");
  walk_cmd->add_option("--out", walk.out, "Trace CSV output");
  walk_cmd->add_option("--report", walk.report, "Autocorrelation report JSON");
  walk_cmd->add_option("--observable", walk.observable, "delta or trajectory")
      ->check(CLI::IsMember({"delta", "trajectory"}));

  EnumerateOptions enumerate;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "List every labeled state for small n");
  enumerate_cmd->add_option("--n", enumerate.n, "Vertex count")->required();
  enumerate_cmd->add_option("--out", enumerate.out, "Mask dump output");
  enumerate_cmd->add_option("--summary", enumerate.summary, "JSON summary output");
  enumerate_cmd->add_flag("--allow-large", enumerate.allow_large, "Permit n = 6 and above");

  BinOptions bin;
  auto* bin_cmd = app.add_subcommand("bin", "Bin a mask stream into isomorphism classes");
  bin_cmd->add_option("--in", bin.in, "Mask stream input")->required();
  bin_cmd->add_option("--out", bin.out, "Bin report CSV");
  bin_cmd->add_option("--residuals", bin.residuals, "Multiplicity residual CSV");

  DiagnoseOptions diagnose;
  auto* diagnose_cmd = app.add_subcommand("diagnose", "Autocorrelation report for a walk trace");
  diagnose_cmd->add_option("--in", diagnose.in, "Trace CSV input")->required();
  diagnose_cmd->add_option("--observable", diagnose.observable, "delta or trajectory")
      ->check(CLI::IsMember({"delta", "trajectory"}));
  diagnose_cmd->add_option("--out", diagnose.out, "Report JSON output");
  diagnose_cmd->add_option("--kmax", diagnose.k_max, "Largest lag (0 = min(length/4, 512))");

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Breadth comparison of walk, balanced and Kahle samplers");
  compare_cmd->add_option("--n", compare.n, "Vertex count");
  compare_cmd->add_option("--budget", compare.budget, "Accepted transitions / samples per sampler");
  compare_cmd->add_option("--seed", compare.seed, "Random seed");
  compare_cmd->add_option("--out-dir", compare.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*sample_cmd) cmd_sample(sample, out);
    else if (*walk_cmd) cmd_walk(walk, out);
    else if (*enumerate_cmd) cmd_enumerate(enumerate, out);
    else if (*bin_cmd) cmd_bin(bin, out);
    else if (*diagnose_cmd) cmd_diagnose(diagnose, out);
    else if (*compare_cmd) cmd_compare(compare, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace asc::cli
