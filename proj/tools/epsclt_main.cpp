// Command-line front end: parse model files, dispatch limit / finite-n
// computations, emit tables (CSV or JSON), run the cross-check suite, and
// evaluate ad-hoc homomorphism densities.
//
// Exit codes: 0 success, 1 schema or input error, 2 term budget exceeded,
// 3 verification failure.

#include "epsclt/epsclt.hpp"
#include "epsclt/io_json.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace epsclt;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 1;
constexpr int kExitBudget = 2;
constexpr int kExitVerify = 3;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "", "cannot open file");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw SchemaError(path, "", std::string("not valid JSON: ") + e.what());
  }
  return j;
}

// Word strings: comma-separated factors, each a run of layer digits with an
// optional trailing '*' ("12,12*" is s_{12} s_{12}^*).
WordSpec parse_word_string(const std::string& text, int L) {
  WordSpec spec;
  spec.L = L;
  std::string factor;
  auto flush = [&](const std::string& f) {
    if (f.empty()) throw std::invalid_argument("word \"" + text + "\": empty factor");
    Subset J = 0;
    Star mark = Star::one;
    for (std::size_t k = 0; k < f.size(); ++k) {
      char c = f[k];
      if (c == '*') {
        if (k + 1 != f.size()) throw std::invalid_argument("word \"" + text + "\": '*' must end a factor");
        mark = Star::star;
      } else if (c >= '1' && c <= '9') {
        int l = c - '0';
        if (l > L) throw std::invalid_argument("word \"" + text + "\": layer " + std::string(1, c) +
                                               " exceeds L=" + std::to_string(L));
        J |= Subset{1} << (l - 1);
      } else {
        throw std::invalid_argument("word \"" + text + "\": bad character '" + std::string(1, c) + "'");
      }
    }
    if (J == 0) throw std::invalid_argument("word \"" + text + "\": factor needs at least one layer");
    spec.J.push_back(J);
    spec.alpha.push_back(mark);
  };
  for (char c : text) {
    if (c == ',') {
      flush(factor);
      factor.clear();
    } else {
      factor += c;
    }
  }
  flush(factor);
  spec.validate();
  return spec;
}

std::string word_to_string(const WordSpec& spec) {
  std::string out;
  for (int r = 0; r < spec.length(); ++r) {
    if (r) out += ",";
    for (int l : subset_elements(spec.J[static_cast<std::size_t>(r)])) out += std::to_string(l);
    if (spec.alpha[static_cast<std::size_t>(r)] == Star::star) out += "*";
  }
  return out;
}

struct Options {
  std::string mode = "exact";
  std::string format = "csv";
  std::uint64_t budget = default_term_budget();

  std::string model_path;
  std::string family_flag;  // "", "complete", "edgeless"
  int p_max_override = 0;   // 0 = take the model's
  std::vector<long long> ns;
  std::string route = "lex";
  bool raw = false;
  std::vector<std::string> words;

  std::string f_path, g_path, w_path, gl_path;
};

// Resolves the finite-side family: explicit flag, then the model document's
// "family" object, then the family realizing a constant 0/1 graphon.
std::optional<GridFamily> resolve_family(const Options& opt, const Json& doc, const StepGraphon& w) {
  if (opt.family_flag == "complete") return GridFamily::complete();
  if (opt.family_flag == "edgeless") return GridFamily::edgeless();
  if (!opt.family_flag.empty())
    throw SchemaError("--family", "", "expected complete or edgeless (others go in the model file)");
  return family_of_document(doc, w);
}

GridFamily require_family(const Options& opt, const Json& doc, const StepGraphon& w) {
  auto fam = resolve_family(opt, doc, w);
  if (!fam)
    throw SchemaError(opt.model_path, "family",
                      "no finite family: add a \"family\" object to the model or pass --family");
  return *fam;
}

template <ScalarType S>
void print_value_rows(const Options& opt, const std::vector<std::pair<std::string, S>>& rows,
                      const std::string& key_name) {
  if (opt.format == "json") {
    Json arr = Json::array();
    for (const auto& [k, v] : rows) {
      Json o;
      o[key_name] = k;
      o["moment"] = scalar_to_json(v);
      arr.push_back(std::move(o));
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    std::cout << key_name << ",moment\n";
    for (const auto& [k, v] : rows) std::cout << k << "," << scalar_to_string(v) << "\n";
  }
}

// ====== limit-moments ======

template <ScalarType S>
int run_limit_moments(const Options& opt) {
  Json doc = load_json(opt.model_path);
  LimitModelT<S> model = parse_model<S>(doc, opt.model_path);
  int p_max = opt.p_max_override > 0 ? opt.p_max_override : model.p_max;
  Budget budget(opt.budget);
  LimitRoute route = opt.route == "master" ? LimitRoute::master : LimitRoute::lexicographic;
  Normalization norm = opt.raw ? Normalization::raw : Normalization::unit_variance;
  std::vector<std::pair<std::string, S>> rows;
  if (opt.words.empty()) {
    for (int p = 1; p <= p_max; ++p)
      rows.emplace_back(std::to_string(p), S_limit_moment(model, p, ones_alpha(p), norm, route, budget));
    print_value_rows(opt, rows, "p");
  } else {
    for (const std::string& wtext : opt.words) {
      WordSpec spec = parse_word_string(wtext, model.layers());
      S v = route == LimitRoute::master
                ? master_limit_moment(lex_limit_decoration(model.gL, model.w), spec, budget)
                : lex_limit_moment(model, spec, budget);
      rows.emplace_back(word_to_string(spec), v);
    }
    print_value_rows(opt, rows, "word");
  }
  return kExitOk;
}

// ====== finite-moments ======

template <ScalarType S>
int run_finite_moments(const Options& opt) {
  Json doc = load_json(opt.model_path);
  LimitModelT<S> model = parse_model<S>(doc, opt.model_path);
  int p_max = opt.p_max_override > 0 ? opt.p_max_override : model.p_max;
  if (opt.ns.empty()) throw SchemaError("-n", "", "need at least one n");
  Budget budget(opt.budget);
  Normalization norm = opt.raw ? Normalization::raw : Normalization::unit_variance;
  GridFamily family = require_family(opt, doc, parse_graphon<Rational>(doc["w"], opt.model_path + ".w"));
  SnEvaluator<S> eval(family, model.gL, model_site_law(model, p_max));
  // Odd-length moments can be irrational (a leftover sqrt(n) or sqrt of the
  // variance constant); exact mode marks those cells NA instead of failing
  // the whole table.
  auto cell = [&](int p, long long n) -> std::optional<S> {
    try {
      return eval.full_moment(p, ones_alpha(p), n, norm, budget);
    } catch (const InexactResultError&) {
      return std::nullopt;
    }
  };
  if (opt.format == "json") {
    Json arr = Json::array();
    for (int p = 1; p <= p_max; ++p) {
      for (long long n : opt.ns) {
        Json o;
        o["p"] = p;
        o["n"] = n;
        auto v = cell(p, n);
        o["moment"] = v ? scalar_to_json(*v) : Json(nullptr);
        arr.push_back(std::move(o));
      }
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    std::cout << "p,n,moment\n";
    for (int p = 1; p <= p_max; ++p) {
      for (long long n : opt.ns) {
        auto v = cell(p, n);
        std::cout << p << "," << n << "," << (v ? scalar_to_string(*v) : std::string("NA")) << "\n";
      }
    }
  }
  return kExitOk;
}

// ====== converge ======

template <ScalarType S>
int run_converge(const Options& opt) {
  Json doc = load_json(opt.model_path);
  LimitModelT<S> model = parse_model<S>(doc, opt.model_path);
  int p_max = opt.p_max_override > 0 ? opt.p_max_override : model.p_max;
  if (opt.ns.empty()) throw SchemaError("-n", "", "need at least one n");
  Budget budget(opt.budget);
  Normalization norm = opt.raw ? Normalization::raw : Normalization::unit_variance;
  GridFamily family = require_family(opt, doc, parse_graphon<Rational>(doc["w"], opt.model_path + ".w"));
  auto rows = convergence_table(model, family, p_max, opt.ns, norm, budget);
  if (opt.format == "json")
    std::cout << rows_to_json(rows).dump(2) << "\n";
  else
    std::cout << rows_to_csv(rows);
  return kExitOk;
}

// ====== verify ======

struct CheckReport {
  std::string name;
  int status = 0;  // 0 pass, 1 fail, 2 skip
  std::string detail;
};

template <ScalarType S>
bool values_match(const S& a, const S& b) {
  if constexpr (std::is_same_v<S, double>) {
    double diff = a > b ? a - b : b - a;
    return diff <= 1e-9 * (1.0 + (a < 0 ? -a : a));
  } else {
    return a == b;
  }
}

template <ScalarType S>
int run_verify(const Options& opt) {
  Json doc = load_json(opt.model_path);
  LimitModelT<S> model = parse_model<S>(doc, opt.model_path);
  int p_max = opt.p_max_override > 0 ? opt.p_max_override : model.p_max;
  Budget budget(opt.budget);
  int L = model.layers();
  const S zero = scalar_ops<S>::from_int(0);
  bool zero_graphon = model.w.is_identically(zero);
  std::vector<CheckReport> reports;

  // The two limit formulas (pairing sweep with subset tables vs decorated
  // homomorphism densities) must give the same S moments.
  {
    CheckReport r{"limit-route-agreement", 0, ""};
    int cap = std::min(p_max, 6);
    for (int p = 1; p <= cap && r.status == 0; ++p) {
      S lex = S_limit_moment(model, p, ones_alpha(p), Normalization::raw, LimitRoute::lexicographic, budget);
      S mas = S_limit_moment(model, p, ones_alpha(p), Normalization::raw, LimitRoute::master, budget);
      if (!values_match(lex, mas)) {
        r.status = 1;
        r.detail = "p=" + std::to_string(p) + ": " + scalar_to_string(lex) + " vs " + scalar_to_string(mas);
      }
    }
    if (r.status == 0) r.detail = "p <= " + std::to_string(cap);
    reports.push_back(std::move(r));
  }

  // With no graphon interaction, word moments of the (s_J) family must
  // match the star family on the subset compatibility graph.
  {
    CheckReport r{"word-star-correspondence", 0, ""};
    if (!zero_graphon) {
      r.status = 2;
      r.detail = "needs w = 0";
    } else {
      std::vector<Subset> subs = nonempty_subsets(L);
      SimpleGraph h = h_graph(model.gL);
      std::vector<PairCumulantTable<S>> vars;
      for (Subset J : subs)
        vars.push_back(classify_sJ(model.gL, J) == SJKind::semicircular
                           ? PairCumulantTable<S>::semicircular()
                           : PairCumulantTable<S>::circular());
      int m = static_cast<int>(subs.size());
      long long total = 1;
      int word_p = 0;
      while (word_p < 4 && total * m <= 100000) {
        total *= m;
        ++word_p;
      }
      long long checked = 0;
      for (int p = 1; p <= word_p && r.status == 0; ++p) {
        for (const AlphaWord& alpha : {ones_alpha(p), alternating_alpha(p)}) {
          WordSpec spec;
          spec.L = L;
          spec.J.assign(static_cast<std::size_t>(p), subs[0]);
          spec.alpha = alpha;
          std::vector<int> word(static_cast<std::size_t>(p), 1);
          std::vector<int> idx(static_cast<std::size_t>(p), 0);
          while (true) {
            for (int t = 0; t < p; ++t) {
              spec.J[static_cast<std::size_t>(t)] = subs[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])];
              word[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t)] + 1;
            }
            S lex = lex_limit_moment(model, spec, budget);
            S star = star_joint_moment(h, vars, word, alpha, budget);
            ++checked;
            if (!values_match(lex, star)) {
              r.status = 1;
              r.detail = "word " + word_to_string(spec) + ": " + scalar_to_string(lex) + " vs " +
                         scalar_to_string(star);
              break;
            }
            int pos = 0;
            while (pos < p && ++idx[static_cast<std::size_t>(pos)] == m) {
              idx[static_cast<std::size_t>(pos)] = 0;
              ++pos;
            }
            if (pos == p) break;
          }
          if (r.status != 0) break;
        }
      }
      if (r.status == 0) r.detail = std::to_string(checked) + " words, p <= " + std::to_string(word_p);
    }
    reports.push_back(std::move(r));
  }

  // Two-layer tensor models have a closed mixture reference law; S moments
  // must match it.
  {
    CheckReport r{"product-reference-agreement", 0, ""};
    bool applies = L == 2 && model.gL.has_edge(1, 2) && zero_graphon && !(model.sigma2 == zero) &&
                   !model.law_moments;
    if (!applies) {
      r.status = 2;
      r.detail = "needs L=2, connected layers, w = 0, semicircular sites";
    } else {
      int cap = std::min(p_max, 8);
      for (int p = 1; p <= cap && r.status == 0; ++p) {
        S lim = S_limit_moment(model, p, ones_alpha(p), Normalization::unit_variance,
                               LimitRoute::lexicographic, budget);
        S ref = tensor2_reference_moment(model.lambda, model.sigma2, p, ones_alpha(p), budget);
        if (!values_match(lim, ref)) {
          r.status = 1;
          r.detail = "p=" + std::to_string(p) + ": " + scalar_to_string(lim) + " vs " + scalar_to_string(ref);
        }
      }
      if (r.status == 0) r.detail = "p <= " + std::to_string(cap);
    }
    reports.push_back(std::move(r));
  }

  // Finite moments must approach the limit along the model's family.
  {
    CheckReport r{"finite-limit-convergence", 0, ""};
    auto fam = resolve_family(opt, doc, parse_graphon<Rational>(doc["w"], opt.model_path + ".w"));
    if (!fam || fam->kind() == GridFamilyKind::fixed) {
      r.status = 2;
      r.detail = fam ? "a single fixed graph has no n sequence" : "no finite family named by the model";
    } else {
      long long unit = fam->kind() == GridFamilyKind::blowup ? fam->pattern().vertex_count() : 1;
      std::vector<long long> ns = {unit * 2, unit * 4, unit * 8};
      auto rows = convergence_table(model, *fam, std::max(2, std::min(p_max, 4)), ns,
                                    opt.raw ? Normalization::raw : Normalization::unit_variance, budget);
      for (std::size_t k = 0; k < rows.size() && r.status == 0; k += ns.size()) {
        const auto& first = rows[k];
        const auto& last = rows[k + ns.size() - 1];
        if (last.abs_diff > first.abs_diff) {
          r.status = 1;
          r.detail = "p=" + std::to_string(first.p) + ": |diff| grew from " +
                     scalar_to_string(first.abs_diff) + " (n=" + std::to_string(first.n) + ") to " +
                     scalar_to_string(last.abs_diff) + " (n=" + std::to_string(last.n) + ")";
        }
      }
      if (r.status == 0)
        r.detail = fam->name() + ", n in {" + std::to_string(ns[0]) + "," + std::to_string(ns[1]) + "," +
                   std::to_string(ns[2]) + "}";
    }
    reports.push_back(std::move(r));
  }

  bool failed = false;
  for (const auto& r : reports) {
    const char* tag = r.status == 0 ? "pass" : r.status == 1 ? "FAIL" : "skip";
    std::cout << "check " << r.name << ": " << tag;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << "\n";
    if (r.status == 1) failed = true;
  }
  return failed ? kExitVerify : kExitOk;
}

// ====== rho ======

template <ScalarType S>
int run_rho(const Options& opt) {
  SimpleGraph f = parse_graph(load_json(opt.f_path), opt.f_path);
  Budget budget(opt.budget);
  if (!opt.g_path.empty()) {
    SimpleGraph g = parse_graph(load_json(opt.g_path), opt.g_path);
    std::cout << scalar_to_string(rho_graph(f, g, budget)) << "\n";
  } else {
    StepGraphonT<S> w = parse_graphon<S>(load_json(opt.w_path), opt.w_path);
    std::cout << scalar_to_string(rho_graphon(f, w, budget)) << "\n";
  }
  return kExitOk;
}

// ====== hl-graph ======

int run_hl_graph(const Options& opt) {
  SimpleGraph gL = opt.gl_path.empty()
                       ? parse_graph(io_detail::member(load_json(opt.model_path), opt.model_path, "g_L"),
                                     opt.model_path + ".g_L")
                       : parse_graph(load_json(opt.gl_path), opt.gl_path);
  int L = gL.vertex_count();
  std::vector<Subset> subs = nonempty_subsets(L);
  SimpleGraph h = h_graph(gL);
  if (opt.format == "json") {
    Json o;
    o["vertices"] = Json::array();
    for (Subset J : subs) o["vertices"].push_back(subset_to_string(J));
    o["edges"] = Json::array();
    for (auto [a, b] : h.edges()) {
      Json e = Json::array();
      e.push_back(subset_to_string(subs[static_cast<std::size_t>(a - 1)]));
      e.push_back(subset_to_string(subs[static_cast<std::size_t>(b - 1)]));
      o["edges"].push_back(std::move(e));
    }
    std::cout << o.dump(2) << "\n";
  } else {
    std::cout << "vertices:";
    for (Subset J : subs) std::cout << " " << subset_to_string(J);
    std::cout << "\nedges:\n";
    for (auto [a, b] : h.edges())
      std::cout << "  " << subset_to_string(subs[static_cast<std::size_t>(a - 1)]) << " -- "
                << subset_to_string(subs[static_cast<std::size_t>(b - 1)]) << "\n";
  }
  return kExitOk;
}

template <class Fn>
int dispatch_mode(const Options& opt, Fn&& fn) {
  if (opt.mode == "float") return fn.template operator()<double>();
  return fn.template operator()<Rational>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact moments for central limit theorems of graph-independent variables"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--mode", opt.mode, "numeric mode")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--budget", opt.budget, "elementary-term budget");

  auto add_model = [&](CLI::App* cmd) {
    cmd->fallthrough();  // lets --mode/--format/--budget appear after the subcommand
    cmd->add_option("--model", opt.model_path, "model JSON file")->required();
  };

  CLI::App* limit = app.add_subcommand("limit-moments", "limiting *-moments of S or of s_J words");
  add_model(limit);
  limit->add_option("--p-max", opt.p_max_override, "override the model's p_max");
  limit->add_option("--route", opt.route, "limit formula route")->check(CLI::IsMember({"lex", "master"}));
  limit->add_flag("--raw", opt.raw, "skip unit-variance normalization");
  limit->add_option("--word", opt.words, "word like \"12,12*\" (repeatable; overrides the S sweep)");

  CLI::App* finite = app.add_subcommand("finite-moments", "exact moments of the centered sum at finite n");
  add_model(finite);
  finite->add_option("--p-max", opt.p_max_override, "override the model's p_max");
  finite->add_option("-n,--n", opt.ns, "grid sizes (repeatable)")->required();
  finite->add_option("--family", opt.family_flag, "site-graph family")
      ->check(CLI::IsMember({"complete", "edgeless"}));
  finite->add_flag("--raw", opt.raw, "skip unit-variance normalization");

  CLI::App* conv = app.add_subcommand("converge", "finite-vs-limit convergence table");
  add_model(conv);
  conv->add_option("--p-max", opt.p_max_override, "override the model's p_max");
  conv->add_option("-n,--n", opt.ns, "grid sizes (repeatable)")->required();
  conv->add_option("--family", opt.family_flag, "site-graph family")
      ->check(CLI::IsMember({"complete", "edgeless"}));
  conv->add_flag("--raw", opt.raw, "skip unit-variance normalization");

  CLI::App* verify = app.add_subcommand("verify", "run the cross-check suite on a model");
  add_model(verify);
  verify->add_option("--p-max", opt.p_max_override, "override the model's p_max");
  verify->add_option("--family", opt.family_flag, "site-graph family")
      ->check(CLI::IsMember({"complete", "edgeless"}));

  CLI::App* rho = app.add_subcommand("rho", "homomorphism density of f in a graph or graphon");
  rho->fallthrough();
  rho->add_option("--f", opt.f_path, "pattern graph JSON")->required();
  auto* g_opt = rho->add_option("--g", opt.g_path, "target graph JSON");
  auto* w_opt = rho->add_option("--w", opt.w_path, "target graphon JSON");
  g_opt->excludes(w_opt);

  CLI::App* hl = app.add_subcommand("hl-graph", "compatibility graph of the layer subsets");
  hl->fallthrough();
  auto* hl_model = hl->add_option("--model", opt.model_path, "model JSON file (uses its g_L)");
  auto* hl_gl = hl->add_option("--gl", opt.gl_path, "layer graph JSON");
  hl_model->excludes(hl_gl);

  CLI11_PARSE(app, argc, argv);

  try {
    if (limit->parsed()) return dispatch_mode(opt, [&]<ScalarType S>() { return run_limit_moments<S>(opt); });
    if (finite->parsed()) return dispatch_mode(opt, [&]<ScalarType S>() { return run_finite_moments<S>(opt); });
    if (conv->parsed()) return dispatch_mode(opt, [&]<ScalarType S>() { return run_converge<S>(opt); });
    if (verify->parsed()) return dispatch_mode(opt, [&]<ScalarType S>() { return run_verify<S>(opt); });
    if (rho->parsed()) {
      if (opt.g_path.empty() && opt.w_path.empty())
        throw SchemaError("rho", "", "need --g or --w");
      return dispatch_mode(opt, [&]<ScalarType S>() { return run_rho<S>(opt); });
    }
    if (hl->parsed()) {
      if (opt.model_path.empty() && opt.gl_path.empty())
        throw SchemaError("hl-graph", "", "need --model or --gl");
      return run_hl_graph(opt);
    }
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  }
  return kExitOk;
}
