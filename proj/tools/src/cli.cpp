#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "model.hpp"

namespace symtherm::cli {

using ojson = nlohmann::ordered_json;

namespace {

// ---- output ---------------------------------------------------------------

using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  ojson meta = ojson::object();  // command specific header fields
};

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// 9 significant digits in JSON too, so both formats carry the same values
ojson json_double(double v) {
  if (!std::isfinite(v)) return fmt_double(v);
  return std::stod(fmt_double(v));
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) {
    if (c == '"') r += '"';
    r += c;
  }
  return r + "\"";
}

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return csv_escape(*s);
  if (const auto* d = std::get_if<double>(&c)) return fmt_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "true" : "false";
}

ojson cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return json_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<bool>(c);
}

std::string render(const Table& t, const ojson& meta, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    ojson doc;
    doc["meta"] = meta;
    ojson rows = ojson::array();
    for (const auto& r : t.rows) {
      ojson row = ojson::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) row[t.columns[i]] = cell_json(r[i]);
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
    return os.str();
  }
  os << "# " << meta.dump() << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i]);
    os << '\n';
  }
  return os.str();
}

// ---- options --------------------------------------------------------------

struct Globals {
  std::string model_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::optional<std::string> phi, psi;
};

struct Context {
  const Globals& g;
  Model model;
  ThermoTolerances tol;
  std::string command;

  double eps(std::optional<double> v) const { return v ? *v : (g.tol ? *g.tol : 1e-9); }

  const Potential& named(const std::string& name) const {
    auto it = model.potentials.find(name);
    if (it == model.potentials.end()) fail(ErrorKind::kValidation, "model has no potential named '" + name + "'");
    return it->second;
  }
  Potential phi() const {
    if (g.phi) return named(*g.phi);
    if (model.potentials.count("phi")) return named("phi");
    if (model.potentials.size() == 1) return model.potentials.begin()->second;
    fail(ErrorKind::kValidation, "model has no potential 'phi'; select one with --phi");
  }
  Potential psi() const {
    if (g.psi) return named(*g.psi);
    if (model.potentials.count("psi")) return named("psi");
    if (model.ifs) return geometric_potential(*model.ifs);
    fail(ErrorKind::kValidation, "model has no potential 'psi' and no ifs section to derive -log r from");
  }
  const AffineIfs& ifs() const {
    if (!model.ifs) fail(ErrorKind::kValidation, "command '" + command + "' needs an \"ifs\" section in the model");
    return *model.ifs;
  }
  CdfModel cdf() const {
    const Potential p = model.gibbs ? named(*model.gibbs) : phi();
    return CdfModel(ifs(), p, tol);
  }
  std::string word(WordView w) const { return model.sft.format(w); }
  std::vector<Word> words(const std::vector<std::string>& texts) const {
    std::vector<Word> r;
    for (const auto& t : texts) r.push_back(model.sft.parse_word(t));
    return r;
  }
};

ojson metadata(const Context& c, const ojson& extra) {
  ojson m;
  m["tool"] = "symtherm";
  m["version"] = kToolVersion;
  m["command"] = c.command;
  m["model_hash"] = "fnv1a64:" + c.model.hash;
  m["tolerances"] = {{"eigen_rel", c.tol.eigen_rel},
                     {"beta_residual", c.tol.beta_residual},
                     {"alpha_match", c.tol.alpha_match},
                     {"cycle_ratio", c.tol.cycle_ratio},
                     {"endpoint_q", c.tol.endpoint_q},
                     {"eps", c.eps(std::nullopt)}};
  m["sign_convention"] = std::string(kSpectrumSignConvention);
  m["seed"] = c.g.seed;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  return m;
}

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      fail(ErrorKind::kValidation, std::string(flag) + ": '" + s + "' is not a number");
    }
  };
  const auto colon = std::count(text.begin(), text.end(), ':');
  if (colon == 2) {
    const auto p1 = text.find(':'), p2 = text.rfind(':');
    const double a = number(text.substr(0, p1)), b = number(text.substr(p1 + 1, p2 - p1 - 1)),
                 step = number(text.substr(p2 + 1));
    if (!(step > 0) || b < a) fail(ErrorKind::kValidation, std::string(flag) + " grid needs a <= b and step > 0");
    const auto n = static_cast<long long>(std::floor((b - a) / step + 1e-9));
    if (n > 1'000'000) fail(ErrorKind::kCapacity, std::string(flag) + " grid has more than 10^6 points");
    for (long long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  if (colon != 0) fail(ErrorKind::kValidation, std::string(flag) + " expects a:b:step or a comma list");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item));
  if (out.empty()) fail(ErrorKind::kValidation, std::string(flag) + " is empty");
  return out;
}

const char* region_name(SpectrumRegion r) {
  switch (r) {
    case SpectrumRegion::kInterior: return "interior";
    case SpectrumRegion::kLowerEndpoint: return "lower-endpoint";
    case SpectrumRegion::kUpperEndpoint: return "upper-endpoint";
    case SpectrumRegion::kDegenerate: return "degenerate";
  }
  return "?";
}

ojson json_words(const Context& c, const std::vector<Word>& ws) {
  ojson a = ojson::array();
  for (const auto& w : ws) a.push_back(c.word(w));
  return a;
}

// ---- commands -------------------------------------------------------------

Table cmd_validate(const Context& c) {
  const Sft& s = c.model.sft;
  if (!is_mixing(s)) fail(ErrorKind::kUnsupportedSpec, "incidence matrix is not primitive: the shift is not topologically mixing");
  Table t;
  t.columns = {"symbols", "mixing_window", "potentials", "ifs", "gibbs"};
  std::string pots;
  for (const auto& [name, p] : c.model.potentials) pots += (pots.empty() ? "" : " ") + name + ":" + std::to_string(p.depth());
  t.rows.push_back({static_cast<long long>(s.size()), static_cast<long long>(mixing_window(s)), pots,
                    c.model.ifs.has_value(), c.model.gibbs.value_or("")});
  return t;
}

Table cmd_pressure(const Context& c) {
  const Potential f = c.phi();
  const GibbsChain ch = gibbs_chain(f, c.tol);
  Table t;
  t.columns = {"pressure", "eigen_bracket", "eigen_residual"};
  t.rows.push_back({ch.pressure(), ch.eigen_bracket(), ch.eigen_residual()});
  return t;
}

Table cmd_beta(const Context& c, const std::string& qs) {
  const Potential phi = c.phi(), psi = c.psi();
  Table t;
  t.columns = {"q", "beta", "beta_prime"};
  for (double q : parse_grid(qs, "--q")) {
    const BetaPoint b = beta_point(q, phi, psi, c.tol);
    t.rows.push_back({q, b.beta, b.beta_prime});
  }
  return t;
}

Table cmd_spectrum(const Context& c, const std::string& grid) {
  const Potential phi = c.phi(), psi = c.psi();
  const AlphaRange range = alpha_range(phi, psi, c.tol);
  const double a0 = full_dim_alpha(phi, psi, c.tol);
  std::vector<double> alphas = parse_grid(grid, "--alpha-grid");
  std::size_t skipped = 0;
  std::vector<double> kept;
  for (double a : alphas) {
    if (a < range.lower - c.tol.alpha_match || a > range.upper + c.tol.alpha_match) {
      ++skipped;
      continue;
    }
    if (std::abs(a - a0) > 1e-12) kept.push_back(a);
  }
  kept.push_back(a0);
  std::sort(kept.begin(), kept.end());
  Table t;
  t.columns = {"q", "beta", "beta_prime", "alpha", "b_alpha", "region", "tolerance"};
  for (double a : kept) {
    const SpectrumPoint p = spectrum_at(std::clamp(a, range.lower, range.upper), phi, psi, range, c.tol);
    t.rows.push_back({p.q, p.beta, p.beta_prime, a, p.value, std::string(region_name(p.region)), p.tolerance});
  }
  t.meta["alpha_range"] = {json_double(range.lower), json_double(range.upper)};
  t.meta["alpha0"] = json_double(a0);
  t.meta["skipped_outside_range"] = skipped;
  return t;
}

Table cmd_alpha_range(const Context& c) {
  const AlphaRange r = alpha_range(c.phi(), c.psi(), c.tol);
  Table t;
  t.columns = {"lower", "upper", "lower_cycle", "upper_cycle"};
  t.rows.push_back({r.lower, r.upper, c.word(r.lower_cycle), c.word(r.upper_cycle)});
  return t;
}

Table cmd_alpha0(const Context& c) {
  Table t;
  t.columns = {"alpha0", "beta0", "b_alpha0"};
  if (c.model.ifs && !c.g.psi) {
    const Alpha0Report r = alpha0(c.cdf());
    t.rows.push_back({r.alpha0, r.beta0, r.spectrum_value});
    return t;
  }
  const Potential phi = c.phi(), psi = c.psi();
  const double a0 = full_dim_alpha(phi, psi, c.tol);
  const SpectrumPoint p = spectrum_at(a0, phi, psi, c.tol);
  t.rows.push_back({a0, beta(0.0, phi, psi, c.tol), p.value});
  return t;
}

Table cmd_subaction(const Context& c) {
  const Potential phi = c.phi();
  const Subaction f = subaction(phi, c.tol);
  Table t;
  t.columns = {"block", "f"};
  for (std::size_t i = 0; i < f.vertices.size(); ++i) t.rows.push_back({c.word(f.vertices[i]), f.values[i]});
  t.meta["max_abs"] = json_double(f.max_abs());
  t.meta["max_residual"] = json_double(f.max_residual(phi));
  t.meta["birkhoff_sup"] = json_double(birkhoff_sup(phi, c.tol));
  return t;
}

Table cmd_words(const Context& c, double K, int m) {
  const Potential phi = c.phi();
  Table t;
  t.columns = {"word", "sup", "inf"};
  std::size_t count = 0;
  visit_window_family(phi, K, m, [&](WordView w, const WordSumBounds& b) {
    if (++count > Limits{}.max_words) fail(ErrorKind::kCapacity, "window family exceeds the enumeration cap");
    t.rows.push_back({c.word(w), b.sup, b.inf});
    return true;
  });
  t.meta["K"] = json_double(K);
  t.meta["length"] = m;
  t.meta["count"] = count;
  return t;
}

struct PostfixResult {
  Table table;
  bool failed = false;
};

PostfixResult cmd_postfix(const Context& c, double Kp, double K, std::optional<int> maxlen) {
  const Potential phi = c.phi();
  const PostfixSet ps = build_postfix_set(phi, Kp, K);
  PostfixResult r;
  Table& t = r.table;
  t.columns = {"tau", "length"};
  for (const auto& w : ps.words) t.rows.push_back({c.word(w), static_cast<long long>(w.size())});
  t.meta["K_prime"] = json_double(ps.K_prime);
  t.meta["K"] = json_double(ps.K);
  t.meta["threshold"] = json_double(ps.threshold);
  t.meta["minus_segment"] = c.word(ps.minus_segment);
  t.meta["plus_segment"] = c.word(ps.plus_segment);
  t.meta["norm"] = ps.norm();
  if (maxlen) {
    const PostfixReport rep = verify_postfix(ps, phi, *maxlen);
    ojson v = {{"passed", rep.passed}, {"max_length", rep.max_length}, {"checked", rep.checked}};
    v["witness"] = rep.witness ? ojson(c.word(*rep.witness)) : ojson(nullptr);
    t.meta["verification"] = v;
    r.failed = !rep.passed;
  }
  return r;
}

struct MassArgs {
  std::optional<double> s;
  std::vector<std::string> F;
  std::optional<double> K;
  int depth = 8;
  int count = 1;
  int levels = 0;
  int max_m = 20;
  std::optional<std::string> word;
  std::optional<std::uint64_t> seed;
};

std::vector<Word> boundary_or_given(const Context& c, const std::vector<std::string>& F) {
  if (!F.empty()) return c.words(F);
  if (c.model.ifs) return build_boundary_words(c.model.ifs->order(), c.model.sft).F;
  fail(ErrorKind::kValidation, "--F is required when the model has no ifs section");
}

MassDistribution mass_model(const Context& c, const MassArgs& a) {
  const Potential phi = c.phi(), psi = c.psi();
  double s = 0.0;
  if (a.s) {
    s = *a.s;
  } else {
    s = 0.5 * beta(0.0, phi, psi, c.tol);
  }
  MassOptions o;
  o.K = a.K;
  o.max_m = a.max_m;
  return build_mass_distribution(phi, psi, s, boundary_or_given(c, a.F), o);
}

void add_certificate_columns(Table& t) {
  t.columns = {"word",       "level",       "in_tree",      "max_abs_sum",      "sum_bound",
               "sum_ok",     "window_ok",   "log_mass",     "log_diameter",     "local_dimension"};
}

std::vector<Cell> certificate_row(const Context& c, WordView w, const MassCertificate& m) {
  return {c.word(w),      static_cast<long long>(m.level), m.in_tree, m.max_abs_sum, m.sum_bound,
          m.sum_ok,       m.window_ok,                     m.log_mass, m.log_diameter, m.local_dimension};
}

Table cmd_massdist(const Context& c, const std::string& mode, const MassArgs& a) {
  const MassDistribution md = mass_model(c, a);
  const std::uint64_t seed = a.seed.value_or(c.g.seed);
  Table t;
  t.meta["s"] = json_double(md.s());
  t.meta["K"] = json_double(md.K());
  t.meta["K_prime"] = json_double(md.K_prime());
  t.meta["m"] = md.m();
  t.meta["F"] = json_words(c, md.F());
  t.meta["tilde"] = c.word(md.tilde());
  if (mode == "build") {
    t.columns = {"s", "K", "K_prime", "m", "tilde", "T_norm", "R_norm", "base_words", "sum_bound", "window_length"};
    t.rows.push_back({md.s(), md.K(), md.K_prime(), static_cast<long long>(md.m()), c.word(md.tilde()),
                      static_cast<long long>(md.postfix().norm()), static_cast<long long>(md.infix().norm()),
                      static_cast<long long>(md.base_words().size()), md.sum_bound(),
                      static_cast<long long>(md.window_length())});
    if (a.levels > 0) {
      ojson prof = ojson::array();
      for (double v : md.max_log_ratio_profile(a.levels)) prof.push_back(json_double(v));
      t.meta["max_log_ratio_profile"] = prof;
    }
    return t;
  }
  if (mode == "sample") {
    t.columns = {"index", "seed", "level", "length", "log_mass", "word"};
    for (int i = 0; i < a.count; ++i) {
      const std::uint64_t sd = seed + static_cast<std::uint64_t>(i);
      const MassNode n = md.sample(a.depth, sd);
      t.rows.push_back({static_cast<long long>(i), static_cast<long long>(sd), static_cast<long long>(n.level),
                        static_cast<long long>(n.word.size()), n.log_mass, c.word(n.word)});
    }
    return t;
  }
  add_certificate_columns(t);
  if (a.word) {
    const Word w = c.model.sft.parse_word(*a.word);
    t.rows.push_back(certificate_row(c, w, md.certify(w)));
    return t;
  }
  for (int i = 0; i < a.count; ++i) {
    const MassNode n = md.sample(a.depth, seed + static_cast<std::uint64_t>(i));
    t.rows.push_back(certificate_row(c, n.word, md.certify(n.word)));
  }
  return t;
}

Table cmd_separating(const Context& c, const std::vector<std::string>& F) {
  const std::vector<Word> f = boundary_or_given(c, F);
  const Word w = separating_word(f, c.model.sft);
  Table t;
  t.columns = {"word", "length"};
  t.rows.push_back({c.word(w), static_cast<long long>(w.size())});
  t.meta["F"] = json_words(c, f);
  return t;
}

Table cmd_counterexample(const Context& c) {
  const Potential phi = c.phi(), psi = c.psi();
  const Word w = counterexample_word(phi, psi);
  Table t;
  t.columns = {"word", "length", "sup_sum", "birkhoff_sup"};
  t.rows.push_back({c.word(w), static_cast<long long>(w.size()), word_sum_bounds(phi, w).sup,
                    birkhoff_sup(phi, c.tol)});
  return t;
}

Table cmd_cdf_eval(const Context& c, const std::vector<double>& xs, std::optional<double> eps) {
  const CdfModel m = c.cdf();
  const double e = c.eps(eps);
  Table t;
  t.columns = {"x", "C"};
  for (double x : xs) t.rows.push_back({x, cdf_eval(m, x, e)});
  t.meta["eps"] = json_double(e);
  return t;
}

Table cmd_cdf_curve(const Context& c, int resolution, std::optional<double> eps) {
  if (resolution < 1) fail(ErrorKind::kValidation, "--resolution must be at least 1");
  const CdfModel m = c.cdf();
  const double e = c.eps(eps);
  Table t;
  t.columns = {"x", "C"};
  for (const auto& [x, y] : cdf_curve(m, resolution, e)) t.rows.push_back({x, y});
  t.meta["eps"] = json_double(e);
  return t;
}

Table cmd_holder(const Context& c, double x, std::optional<double> alpha, int depth, int min_depth,
                 std::optional<double> C) {
  const CdfModel m = c.cdf();
  const double a = alpha ? *alpha : alpha0(m).alpha0;
  const HolderProbe p = holder_probe(m, x, a, depth, min_depth);
  Table t;
  t.columns = {"scale", "side", "delta", "ratio"};
  for (const auto& r : p.records) t.rows.push_back({r.scale, static_cast<long long>(r.side), r.delta, r.ratio});
  t.meta["x"] = json_double(x);
  t.meta["alpha"] = json_double(a);
  t.meta["exponent"] = json_double(p.exponent);
  t.meta["min_ratio"] = json_double(p.min_ratio);
  t.meta["max_ratio"] = json_double(p.max_ratio);
  if (C) {
    t.meta["C"] = json_double(*C);
    t.meta["moderate"] = moderate_check(m, x, a, *C, min_depth, depth);
  }
  return t;
}

Table cmd_certified(const Context& c, std::optional<double> alpha, int l, int depth) {
  const CdfModel m = c.cdf();
  const double a = alpha ? *alpha : alpha0(m).alpha0;
  const CertifiedPoint p = certified_point(m, a, l, depth, c.g.seed);
  Table t;
  t.columns = {"x",     "alpha", "s",         "l",        "window_constant", "n_ok",
               "level", "sum_ok", "window_ok", "log_mass", "local_dimension", "separating", "prefix"};
  t.rows.push_back({p.x, p.alpha, p.s, static_cast<long long>(p.l), static_cast<long long>(p.window_constant), p.n_ok,
                    static_cast<long long>(p.mass.level), p.mass.sum_ok, p.mass.window_ok, p.mass.log_mass,
                    p.mass.local_dimension, c.word(p.separating), c.word(p.prefix)});
  t.meta["F"] = json_words(c, p.F);
  t.meta["max_abs_sum"] = json_double(p.max_abs_sum);
  return t;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermodynamic formalism on subshifts of finite type", "symtherm"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Globals g;
  auto add_globals = [&](CLI::App* a) {
    a->add_option("--model", g.model_path, "model file (JSON)")->check(CLI::ExistingFile);
    a->add_option("--out", g.out_path, "write output to this file instead of stdout");
    a->add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    a->add_option("--tol", g.tol, "alpha matching tolerance and default cdf eps")->check(CLI::PositiveNumber);
    a->add_option("--seed", g.seed, "random seed");
    a->add_option("--phi", g.phi, "potential used as phi (default 'phi')");
    a->add_option("--psi", g.psi, "potential used as psi (default 'psi', or -log r with an ifs)");
  };
  add_globals(&app);
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  auto* validate = sub("validate", "check the model file");
  auto* pressure_cmd = sub("pressure", "topological pressure of phi");
  std::string q_text;
  auto* beta_cmd = sub("beta", "beta(q) and beta'(q)");
  beta_cmd->add_option("--q", q_text, "a:b:step or comma list")->required();
  std::string alpha_grid;
  auto* spectrum = sub("spectrum", "spectrum b(alpha) over a grid");
  spectrum->add_option("--alpha-grid", alpha_grid, "a:b:step or comma list")->required();
  auto* range_cmd = sub("alpha-range", "extreme Birkhoff ratios");
  auto* alpha0_cmd = sub("alpha0", "ratio of full dimension");
  auto* subaction_cmd = sub("subaction", "sub-action of phi (zero max cycle mean)");
  double words_K = 0.0;
  int words_m = 1;
  auto* words = sub("words", "enumerate the window family W^m_K");
  words->add_option("--K", words_K)->required()->check(CLI::NonNegativeNumber);
  words->add_option("--m", words_m)->required()->check(CLI::PositiveNumber);
  double pf_Kp = 0.0, pf_K = 0.0;
  std::optional<int> pf_max;
  auto* postfix = sub("postfix", "postfix set T for W_K' into W_K");
  postfix->add_option("--Kp", pf_Kp)->required();
  postfix->add_option("--K", pf_K)->required();
  postfix->add_option("--verify-maxlen", pf_max)->check(CLI::PositiveNumber);

  MassArgs ma;
  auto* mass = sub("massdist", "mass distribution on the inductive families");
  mass->require_subcommand(1);
  auto mass_opts = [&](CLI::App* s) {
    s->fallthrough();
    s->add_option("--s", ma.s, "exponent s (default beta(0)/2)");
    s->add_option("--F", ma.F, "words of F, comma separated (default boundary words of the ifs)")->delimiter(',');
    s->add_option("--K", ma.K, "window bound K");
    s->add_option("--max-m", ma.max_m)->check(CLI::PositiveNumber);
  };
  auto* mass_build = mass->add_subcommand("build", "construction constants");
  mass_opts(mass_build);
  mass_build->add_option("--levels", ma.levels, "also report the mass ratio profile up to this level");
  auto* mass_sample = mass->add_subcommand("sample", "draw branches proportionally to mass");
  mass_opts(mass_sample);
  auto* mass_certify = mass->add_subcommand("certify", "check bounds along sampled or given words");
  mass_opts(mass_certify);
  for (auto* s : {mass_sample, mass_certify}) {
    s->add_option("--depth", ma.depth)->check(CLI::PositiveNumber);
    s->add_option("--count", ma.count)->check(CLI::PositiveNumber);
  }
  mass_certify->add_option("--word", ma.word, "certify this word instead of samples");

  std::vector<std::string> sep_F;
  auto* separating = sub("separating-word", "word avoiding every shift of omega^infinity, omega in F");
  separating->add_option("--F", sep_F)->delimiter(',');
  auto* counter = sub("counterexample", "cyclic word with very negative sum (alpha- = 0 case)");

  auto* cdf = sub("cdf", "distribution function of the pushed Gibbs measure");
  cdf->require_subcommand(1);
  std::vector<double> cdf_x;
  std::optional<double> cdf_eps;
  int cdf_res = 100;
  auto* cdf_ev = cdf->add_subcommand("eval", "C(x) within eps");
  cdf_ev->fallthrough();
  cdf_ev->add_option("--x", cdf_x)->required()->delimiter(',');
  cdf_ev->add_option("--eps", cdf_eps)->check(CLI::PositiveNumber);
  auto* cdf_cv = cdf->add_subcommand("curve", "C on a uniform grid");
  cdf_cv->fallthrough();
  cdf_cv->add_option("--resolution", cdf_res)->check(CLI::PositiveNumber);
  cdf_cv->add_option("--eps", cdf_eps)->check(CLI::PositiveNumber);

  double h_x = 0.0;
  std::optional<double> h_alpha, h_C;
  int h_depth = 20, h_min = 1;
  auto* holder = sub("holder", "two-sided dyadic probes of |C(y)-C(x)| / |y-x|^alpha");
  holder->add_option("--x", h_x)->required();
  holder->add_option("--alpha", h_alpha, "default alpha0");
  holder->add_option("--depth", h_depth)->check(CLI::PositiveNumber);
  holder->add_option("--min-depth", h_min)->check(CLI::PositiveNumber);
  holder->add_option("--C", h_C, "also run the moderate check with this constant")->check(CLI::PositiveNumber);

  std::optional<double> cp_alpha;
  int cp_l = 50, cp_depth = 8;
  auto* certified = sub("certified-point", "point whose coding avoids F^l, with mass certificate");
  certified->add_option("--alpha", cp_alpha, "default alpha0");
  certified->add_option("--l", cp_l)->check(CLI::PositiveNumber);
  certified->add_option("--depth", cp_depth)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (g.model_path.empty()) fail(ErrorKind::kValidation, "--model is required");
    Context c{g, load_model(g.model_path), kDefaultTolerances, app.get_subcommands().front()->get_name()};
    if (g.tol) c.tol.alpha_match = *g.tol;
    Table t;
    bool failed = false;
    std::string failure;
    if (validate->parsed()) {
      t = cmd_validate(c);
    } else if (pressure_cmd->parsed()) {
      t = cmd_pressure(c);
    } else if (beta_cmd->parsed()) {
      t = cmd_beta(c, q_text);
    } else if (spectrum->parsed()) {
      t = cmd_spectrum(c, alpha_grid);
    } else if (range_cmd->parsed()) {
      t = cmd_alpha_range(c);
    } else if (alpha0_cmd->parsed()) {
      t = cmd_alpha0(c);
    } else if (subaction_cmd->parsed()) {
      t = cmd_subaction(c);
    } else if (words->parsed()) {
      t = cmd_words(c, words_K, words_m);
    } else if (postfix->parsed()) {
      auto r = cmd_postfix(c, pf_Kp, pf_K, pf_max);
      t = std::move(r.table);
      failed = r.failed;
      failure = "postfix verification found a word of W_K' with no postfix in T";
    } else if (mass->parsed()) {
      const std::string mode = mass_build->parsed() ? "build" : mass_sample->parsed() ? "sample" : "certify";
      c.command += " " + mode;
      t = cmd_massdist(c, mode, ma);
    } else if (separating->parsed()) {
      t = cmd_separating(c, sep_F);
    } else if (counter->parsed()) {
      t = cmd_counterexample(c);
    } else if (cdf->parsed()) {
      if (cdf_ev->parsed()) {
        c.command += " eval";
        t = cmd_cdf_eval(c, cdf_x, cdf_eps);
      } else {
        c.command += " curve";
        t = cmd_cdf_curve(c, cdf_res, cdf_eps);
      }
    } else if (holder->parsed()) {
      t = cmd_holder(c, h_x, h_alpha, h_depth, h_min, h_C);
    } else if (certified->parsed()) {
      t = cmd_certified(c, cp_alpha, cp_l, cp_depth);
    }
    const std::string text = render(t, metadata(c, t.meta), g.format);
    if (g.out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(g.out_path, std::ios::binary);
      if (!f) fail(ErrorKind::kValidation, "cannot write '" + g.out_path + "'");
      f << text;
    }
    if (failed) {
      err << "symtherm: error [" << to_string(ErrorKind::kInfeasible) << "]: " << failure << '\n';
      return exit_code(ErrorKind::kInfeasible);
    }
    return 0;
  } catch (const NumericalError& e) {
    err << "symtherm: error [" << to_string(e.kind()) << "]: " << e.what() << " (last bracket [" << fmt_double(e.lower())
        << ", " << fmt_double(e.upper()) << "])\n";
    return exit_code(e.kind());
  } catch (const Error& e) {
    err << "symtherm: error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "symtherm: error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace symtherm::cli
