#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "cpi/cli/cli.hpp"
#include "cpi/cli/svg.hpp"
#include "cpi/cli/verify_suites.hpp"
#include "cpi/contact/interface.hpp"
#include "cpi/graphical/event_io.hpp"
#include "cpi/montecarlo/renorm_runs.hpp"
#include "cpi/montecarlo/store.hpp"

namespace cpi::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

template <class T>
std::vector<T> parse_csv(const std::string& text, const char* what) {
  std::vector<T> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T x{};
    if (!(is >> x) || !(is >> std::ws).eof()) throw InvalidArgument(std::string("cannot parse ") + what + " '" + text + "'");
    v.push_back(x);
  }
  return v;
}

template <class T>
T pick(const Options& o, const char* name, T value, T fallback) {
  return o.has(name) ? value : fallback;
}

// Prints the resolved config and its hash; out and threads are not part of it.
void announce(std::ostream& out, const json& cfg) {
  out << "config " << cfg.dump() << "\n";
  out << "config_hash " << config_hash(cfg) << "\n";
}

void write_json(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

std::string prop_text(const json& p) {
  if (p["freq"].is_null()) return "n/a";
  return std::to_string(p["count"].get<std::int64_t>()) + "/" + std::to_string(p["trials"].get<std::int64_t>()) +
         " = " + fmt(p["freq"].get<double>()) + " [" + fmt(p["ci_lo"].get<double>()) + ", " +
         fmt(p["ci_hi"].get<double>()) + "]";
}

KernelConfig kernel_config(const Options& o, double default_lambda) {
  return {pick(o, "lambda", o.lambda, default_lambda), o.range, o.kernel};
}

ExperimentConfig experiment_config(const Options& o) {
  ExperimentConfig c;
  const auto k = kernel_config(o, 4.0);
  c.lambda = k.lambda;
  c.range = k.range;
  c.kernel_weights = k.weights;
  c.T = o.T;
  if (!o.grid.empty()) c.grid = parse_csv<double>(o.grid, "grid");
  c.replicas = o.replicas;
  c.seed = o.seed;
  c.guard = o.guard;
  c.gamma = o.gamma;
  c.policy = o.abort_contaminated ? ContaminationPolicy::kAbort : ContaminationPolicy::kDiscard;
  c.threads = o.threads;
  c.validate();
  return c;
}

void need_out_for_dump(const Options& o) {
  if (o.dump_events && o.out.empty()) throw InvalidArgument("--dump-events needs --out");
}

}  // namespace

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  need_out_for_dump(o);
  ExperimentConfig c = experiment_config(o);
  json cfg;
  cfg["command"] = "simulate";
  const Site g = c.resolved_guard();
  const HarrisEvents h = o.load_events.empty() ? sample_harris(c.kernel(), Window::make(-g, g, c.T), c.seed)
                                               : load_events(o.load_events);
  if (!o.load_events.empty()) {
    c.T = h.window().t_max;
    if (!o.has("grid")) c.grid.clear();
    cfg["events"] = o.load_events;
    cfg["seed"] = h.seed();
    cfg["window"] = {h.window().x_min, h.window().x_max, h.window().t_max};
    cfg["kernel"] = h.kernel().weights_csv();
    cfg["lambda"] = h.kernel().lambda();
  } else {
    cfg["lambda"] = c.lambda;
    cfg["range"] = c.range;
    cfg["kernel"] = c.kernel_weights;
    cfg["T"] = c.T;
    cfg["seed"] = c.seed;
    cfg["guard"] = g;
  }
  const auto grid = c.resolved_grid();
  cfg["grid"] = grid;
  announce(out, cfg);
  const auto s = interface_series(h, grid);
  out << "events " << h.raw_events().size() << "\n";
  std::ostringstream csv;
  csv.precision(17);
  write_interface_csv(csv, s);
  out << csv.str();
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_json(fs::path(o.out) / "config.json", cfg);
    write_file_atomic(fs::path(o.out) / "interface.csv", csv.str());
    if (o.dump_events) {
      std::ostringstream ev;
      write_events(ev, h);
      write_file_atomic(fs::path(o.out) / "events.txt", ev.str());
    }
  }
  return kExitOk;
}

int cmd_interface(const Options& o, std::ostream& out, std::ostream& err) {
  need_out_for_dump(o);
  const ExperimentConfig c = experiment_config(o);
  announce(out, c.to_json());
  const SampleStore store = run_experiment(c);
  const json& s = store.summary;
  out << "replicas " << s["replicas"] << " used " << s["used"] << " contaminated " << s["contaminated"] << "\n";
  out << "t alpha alpha_ci |rho|_q50 |rho|_q90 |rho|_q99\n";
  for (const auto& row : s["per_time"]) {
    out << row["t"].get<double>() << " ";
    if (row.contains("alpha")) {
      out << fmt(row["alpha"].get<double>()) << " [" << fmt(row["alpha_ci_lo"].get<double>()) << ", "
          << fmt(row["alpha_ci_hi"].get<double>()) << "]";
    } else {
      out << "- -";
    }
    out << " " << row["abs_rho_q50"] << " " << row["abs_rho_q90"] << " " << row["abs_rho_q99"] << "\n";
  }
  out << "tightness L " << s["tightness"]["L"] << "\n";
  for (const auto& row : s["tightness"]["rows"]) out << "  t " << row["t"] << " P(|rho|>L) " << prop_text(row) << "\n";
  if (s.contains("slow")) {
    out << "gamma-slow escapes, gamma " << s["slow"]["gamma"] << "\n";
    for (const auto& row : s["slow"]["rows"]) {
      out << "  T " << row["T"] << " escape by 2T " << prop_text(row["escape_by_2T"]) << "\n";
    }
  }
  if (store.contaminated > 0) err << "note: " << store.contaminated << " contaminated replicas discarded\n";
  if (!o.out.empty()) {
    write_store(o.out, store);
    if (o.dump_events) {
      // constructions of the first contaminated replicas, for reproduction
      int dumped = 0;
      const Site g = c.resolved_guard();
      for (const auto& r : store.replicas) {
        if (!r.contaminated || dumped == 10) continue;
        std::ostringstream ev;
        write_events(ev, sample_harris(c.kernel(), Window::make(-g, g, c.T), r.seed));
        write_file_atomic(fs::path(o.out) / ("events-" + std::to_string(r.index) + ".txt"), ev.str());
        ++dumped;
      }
    }
  }
  return kExitOk;
}

namespace {

int blocks_field(const Options& o, std::ostream& out) {
  BlockRunConfig c;
  c.kernel = kernel_config(o, 16.0);
  c.shape = {o.K, o.N, o.beta};
  c.n_max = pick(o, "i", o.i, 2);
  c.m_max = o.m_max > 0 ? o.m_max : c.n_max + 2;
  c.fields = o.replicas;
  c.verify_cells = o.cases;
  c.guard = o.guard;
  c.seed = o.seed;
  c.threads = o.threads;
  json cfg = c.to_json();
  cfg["command"] = "blocks field";
  announce(out, cfg);
  const auto r = run_blocks(c);
  const json s = block_summary(c, r);
  out << "fields used " << r.fields.size() << " contaminated " << r.contaminated << "\n";
  out << "n phi0 phi1 phi2\n";
  for (const auto& row : s["levels"]) out << row["n"] << " " << row["phi0"] << " " << row["phi1"] << " " << row["phi2"] << "\n";
  out << "condition failures " << s["condition_failures"].dump() << "\n";
  for (const auto& row : s["closure"]) {
    out << "closure r " << row["r"] << " trials " << row["trials"] << " freq " << fmt(row["freq"].get<double>())
        << " eps_hat " << fmt(row["eps_hat"].get<double>()) << " ci [" << fmt(row["ci_lo"].get<double>()) << ", "
        << fmt(row["ci_hi"].get<double>()) << "]\n";
  }
  out << "verified cells " << r.verified << " mismatches " << r.mismatches.size() << "\n";
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_json(fs::path(o.out) / "config.json", cfg);
    write_json(fs::path(o.out) / "summary.json", s);
    std::ostringstream csv;
    csv << "# cpi-fields v1\nfield,seed,m,n,phi,psi\n";
    for (std::size_t f = 0; f < r.fields.size(); ++f) {
      const auto& b = r.fields[f];
      const auto& lw = b.lambda_window();
      for (int n = 0; n <= lw.n_max; ++n) {
        for (int m = -lw.m_max; m <= lw.m_max; ++m) {
          if (!lw.contains(m, n)) continue;
          csv << f << ',' << b.seed << ',' << m << ',' << n << ',' << int{b.phi(m, n)} << ',' << int{b.psi(m, n)}
              << '\n';
        }
      }
    }
    write_file_atomic(fs::path(o.out) / "fields.csv", csv.str());
  }
  return r.mismatches.empty() ? kExitOk : kExitVerifyFailed;
}

int blocks_expanding(const Options& o, std::ostream& out) {
  ExpandingRunConfig c;
  c.kernel = kernel_config(o, 64.0);
  c.shape = {o.K, pick(o, "N", o.N, 3), o.beta};
  c.horizon = o.i;
  c.accept = o.replicas;
  c.queries = o.queries;
  c.margin = o.guard;
  c.max_draws = o.max_draws;
  c.seed = o.seed;
  c.threads = o.threads;
  json cfg = c.to_json();
  cfg["command"] = "blocks expanding";
  announce(out, cfg);
  const auto r = run_expanding(c);
  const json s = expanding_summary(c, r);
  out << "draws " << r.draws << " prefilter " << r.prefilter_pass << " local " << r.local_pass << " accepted "
      << r.samples.size() << (r.exhausted ? " (draw cap reached)" : "") << "\n";
  out << "local rate " << prop_text(s["local_rate"]) << "\n";
  out << "queries " << s["queries"] << " premise(i) " << s["premise_i"] << " premise(iii) " << s["premise_iii"]
      << " contaminated " << s["contaminated_queries"] << "\n";
  out << "violations (i) " << s["violations_i"] << " (ii) " << s["violations_ii"] << " (ii weak) "
      << s["violations_ii_weak"] << " (iii) " << s["violations_iii"] << "\n";
  out << "min calibrated slope " << s["beta_bar_min"] << "\n";
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_json(fs::path(o.out) / "config.json", cfg);
    write_json(fs::path(o.out) / "summary.json", s);
  }
  const bool bad = s["violations_i"] != 0 || s["violations_ii"] != 0 || s["violations_iii"] != 0;
  return bad ? kExitVerifyFailed : kExitOk;
}

int blocks_good(const Options& o, std::ostream& out) {
  GoodScanConfig c;
  c.kernel = kernel_config(o, 64.0);
  c.shape = {o.K, pick(o, "N", o.N, 3), o.beta};
  c.horizon = o.i;
  c.gamma = o.gamma;
  c.a = o.a;
  if (!o.lengths.empty()) c.lengths = parse_csv<double>(o.lengths, "lengths");
  c.dt = o.dt;
  c.replicas = o.replicas;
  c.seed = o.seed;
  c.guard = o.guard;
  c.threads = o.threads;
  json cfg = c.to_json();
  cfg["command"] = "blocks good";
  announce(out, cfg);
  const auto r = run_good_scan(c);
  const json s = good_scan_summary(c, r);
  out << "used " << r.used << " points " << s["points"] << " prefilter " << s["prefilter_pass"] << " local "
      << s["local_pass"] << " slow " << s["slow_pass"] << "\n";
  for (const auto& row : s["no_good"]) out << "b-a " << row["length"] << " P(no good point) " << prop_text(row) << "\n";
  out << "fit in sqrt(b-a) " << s["fit_sqrt"].dump() << "\n";
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_json(fs::path(o.out) / "config.json", cfg);
    write_json(fs::path(o.out) / "summary.json", s);
  }
  return kExitOk;
}

}  // namespace

int cmd_blocks(const Options& o, std::ostream& out, std::ostream&) {
  if (o.what == "expanding") return blocks_expanding(o, out);
  if (o.what == "good") return blocks_good(o, out);
  return blocks_field(o, out);
}

int cmd_percolate(const Options& o, std::ostream& out, std::ostream&) {
  EscapeConfig c;
  c.p = o.p;
  c.beta = o.beta;
  c.height = pick(o, "height", o.height, std::max(o.i, 30));
  c.levels = o.levels.empty() ? std::vector<int>{o.i} : parse_csv<int>(o.levels, "levels");
  c.fields = o.replicas;
  c.seed = o.seed;
  c.threads = o.threads;
  json cfg = c.to_json();
  cfg["command"] = "percolate";
  announce(out, cfg);
  const auto r = run_escapes(c);
  const json s = escape_summary(c, r);
  for (const auto& row : s["escapes"]) {
    out << "i " << row["level"] << " Gamma(i) " << prop_text(row["gamma_i"]) << " escape " << prop_text(row) << "\n";
  }
  out << "Gamma(height) " << prop_text(s["gamma_height"]) << "\n";
  if (c.levels.size() >= 3) out << "fit " << s["fit"].dump() << "\n";
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_json(fs::path(o.out) / "config.json", cfg);
    write_json(fs::path(o.out) / "summary.json", s);
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<std::string> suites;
  if (o.suite == "all") {
    suites = suite_names();
  } else {
    const auto& n = suite_names();
    if (std::find(n.begin(), n.end(), o.suite) == n.end()) {
      throw InvalidArgument("unknown suite '" + o.suite + "' (oracle, coupling, chi, blocks, prefilter, all)");
    }
    suites = {o.suite};
  }
  json cfg;
  cfg["command"] = "verify";
  cfg["suites"] = suites;
  cfg["cases"] = o.cases;
  cfg["seed"] = o.seed;
  announce(out, cfg);
  json reports = json::array();
  bool ok = true;
  for (const auto& name : suites) {
    const auto rep = run_suite(name, o.cases, o.seed, o.threads);
    out << "suite " << rep.name << " cases " << rep.cases << " checks " << rep.checks << " failures "
        << rep.failures << (rep.ok() ? " ok" : " FAILED") << "\n";
    for (const auto& n : rep.notes) out << "  " << n << "\n";
    ok = ok && rep.ok();
    reports.push_back(rep.to_json());
  }
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_json(fs::path(o.out) / "verify.json", {{"config", cfg}, {"suites", reports}});
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

namespace {

double freq_or(const json& p, double fallback) { return p["freq"].is_null() ? fallback : p["freq"].get<double>(); }

std::vector<std::pair<std::string, Plot>> interface_plots(const json& s) {
  std::vector<std::pair<std::string, Plot>> plots;
  Plot speed{"edge speed r_t / t", "t", "alpha", false, {}};
  PlotSeries a{"alpha", {}, {}, true}, lo{"95% lo", {}, {}, true}, hi{"95% hi", {}, {}, true};
  for (const auto& row : s["per_time"]) {
    if (!row.contains("alpha")) continue;
    const double t = row["t"].get<double>();
    a.x.push_back(t), a.y.push_back(row["alpha"].get<double>());
    lo.x.push_back(t), lo.y.push_back(row["alpha_ci_lo"].get<double>());
    hi.x.push_back(t), hi.y.push_back(row["alpha_ci_hi"].get<double>());
  }
  speed.series = {a, lo, hi};
  plots.emplace_back("speed", speed);

  Plot tight{"P(|rho_t| > L), L = " + fmt(s["tightness"]["L"].get<double>()), "t", "probability", false, {}};
  PlotSeries p{"estimate", {}, {}, true};
  for (const auto& row : s["tightness"]["rows"]) {
    p.x.push_back(row["t"].get<double>());
    p.y.push_back(freq_or(row, 0.0));
  }
  tight.series = {p};
  plots.emplace_back("tightness", tight);

  if (s.contains("excursion")) {
    Plot exc{"P(q_t - r_t > L)", "L", "probability", true, {}};
    const auto times = s["per_time"];
    for (std::size_t j = 0; j < times.size(); ++j) {
      PlotSeries e{"t = " + fmt(times[j]["t"].get<double>()), {}, {}, true};
      for (const auto& row : s["excursion"]) {
        e.x.push_back(row["L"].get<double>());
        e.y.push_back(freq_or(row["by_time"][j], 0.0));
      }
      exc.series.push_back(e);
    }
    plots.emplace_back("excursion", exc);
  }
  if (s.contains("slow")) {
    Plot slow{"gamma-slow up to T, violated by 2T", "T", "probability", true, {}};
    PlotSeries e{"estimate", {}, {}, true};
    for (const auto& row : s["slow"]["rows"]) {
      e.x.push_back(row["T"].get<double>());
      e.y.push_back(freq_or(row["escape_by_2T"], 0.0));
    }
    slow.series = {e};
    plots.emplace_back("slow_escape", slow);
  }
  return plots;
}

PlotSeries fit_series(const json& fit, const std::vector<double>& x, bool sqrt_x) {
  PlotSeries f{"log-linear fit", {}, {}, true};
  if (!fit.contains("slope")) return f;
  for (double v : x) {
    f.x.push_back(v);
    f.y.push_back(std::exp(fit["intercept"].get<double>() + fit["slope"].get<double>() * (sqrt_x ? std::sqrt(v) : v)));
  }
  return f;
}

}  // namespace

int cmd_plot(const Options& o, std::ostream& out, std::ostream&) {
  if (o.in.empty() || o.out.empty()) throw InvalidArgument("plot needs --in and --out");
  fs::path in = o.in;
  if (fs::is_directory(in)) in /= "summary.json";
  std::ifstream f(in);
  if (!f) throw InvalidArgument("cannot read " + in.string());
  json s;
  try {
    s = json::parse(f);
  } catch (const json::exception& e) {
    throw InvalidArgument(in.string() + ": " + e.what());
  }
  const std::string schema = s.value("schema", "");
  std::vector<std::pair<std::string, Plot>> plots;
  if (schema == "cpi-summary v1") {
    plots = interface_plots(s);
  } else if (schema == "cpi-escapes v1") {
    Plot p{"Gamma(i) escapes", "i", "probability", true, {}};
    PlotSeries e{"estimate", {}, {}, false};
    for (const auto& row : s["escapes"]) {
      e.x.push_back(row["level"].get<double>());
      e.y.push_back(freq_or(row, 0.0));
    }
    p.series = {e, fit_series(s["fit"], e.x, false)};
    plots.emplace_back("escapes", p);
  } else if (schema == "cpi-good v1") {
    Plot p{"P(no good point on [a, b])", "b - a", "probability", true, {}};
    PlotSeries e{"estimate", {}, {}, false};
    for (const auto& row : s["no_good"]) {
      e.x.push_back(row["length"].get<double>());
      e.y.push_back(freq_or(row, 0.0));
    }
    p.series = {e, fit_series(s["fit_sqrt"], e.x, true)};
    plots.emplace_back("no_good", p);
  } else if (schema == "cpi-blocks v1") {
    Plot p{"closed cells per level", "n", "fraction with phi = 0", false, {}};
    PlotSeries e{"phi = 0", {}, {}, true};
    for (const auto& row : s["levels"]) {
      const double tot = row["phi0"].get<double>() + row["phi1"].get<double>();
      e.x.push_back(row["n"].get<double>());
      e.y.push_back(tot > 0 ? row["phi0"].get<double>() / tot : 0.0);
    }
    p.series = {e};
    plots.emplace_back("closed", p);
  } else {
    throw InvalidArgument("no plots for schema '" + schema + "'");
  }
  json cfg;
  cfg["command"] = "plot";
  cfg["in"] = in.string();
  cfg["schema"] = schema;
  announce(out, cfg);
  fs::create_directories(o.out);
  for (const auto& [name, p] : plots) {
    write_plot(fs::path(o.out) / name, p);
    out << "wrote " << (fs::path(o.out) / name).string() << ".svg/.dat\n";
  }
  return kExitOk;
}

}  // namespace cpi::cli
