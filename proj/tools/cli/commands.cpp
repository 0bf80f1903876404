#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "autofile.hpp"
#include "json.hpp"
#include "polyaut/error.hpp"
#include "polyaut/grouptheory.hpp"
#include "polyaut/obstruct.hpp"
#include "polyaut/plane.hpp"

namespace polyaut::cli {

using nlohmann::json;

namespace {

struct Options {
  bool pretty = false;
  std::string field = "q";
  std::uint64_t seed = 1;
  std::uint64_t trials = 500;
  int kmax = 3;
  long long degree_cap = 64;
  unsigned threads = 0;

  std::vector<std::string> inputs;
  std::vector<std::string> exprs;
  std::string poly;
  std::string group;
  std::string t = "1";
  std::string weights;
  std::string sources, targets;
  long long r = 1;
  std::size_t n = 2;
};

struct Result {
  json data;
  std::string text;
  int code = kExitOk;
};

std::string read_input(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path);
  if (!in.good()) fail(Reason::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

FieldSpec field_of(const Options& o) { return FieldSpec::parse(o.field); }

// Files first, then inline maps.
std::vector<Endo> load_maps(const Options& o) {
  std::vector<Endo> maps;
  for (const auto& path : o.inputs) maps.push_back(parse_autofile(read_input(path)));
  for (const auto& e : o.exprs) {
    auto comps = split(e, ';');
    maps.push_back(Endo::parse(field_of(o), comps.size(), comps));
  }
  return maps;
}

Endo one_map(const Options& o) {
  auto maps = load_maps(o);
  require(maps.size() == 1, Reason::InvalidArgument, "expected exactly one map");
  return maps.front();
}

Endo plane_map(const Options& o) {
  Endo f = one_map(o);
  require(f.n() == 2, Reason::ArityMismatch, "this command works on plane maps");
  return f;
}

// Univariate p(y) from --poly.
MPoly poly_of(const Options& o) {
  require(!o.poly.empty(), Reason::InvalidArgument, "--poly is required");
  return TriMap::parse_p(field_of(o), o.poly);
}

std::string y_string(const MPoly& p) {
  return p.substitute(std::vector{MPoly::variable(p.field(), 2, 1)}).to_string();
}

Result map_result(const Endo& f) { return {autofile_json(f), f.to_string()}; }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const std::vector<Scalar>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s.to_string());
  return a;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

template <class T>
std::string join_numbers(const std::vector<T>& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) parts.push_back(std::to_string(x));
  return join(parts, ", ");
}

GroupEnum load_group(const Options& o) {
  const std::string& g = o.group;
  if (g == "2O") {
    FieldSpec z = FieldSpec::cyclotomic8();
    return group_closure(z, 2, binary_octahedral_generators(z));
  }
  if (g == "Q8") {
    FieldSpec z = FieldSpec::cyclotomic8();
    return group_closure(z, 2, quaternion_generators(z));
  }
  if (g == "V4") return group_closure(field_of(o), 2, klein_generators(field_of(o)));
  if (g == "trivial") return group_closure(field_of(o), 2, {});
  require(!g.empty(), Reason::InvalidArgument, "--group is required (2O, Q8, V4, trivial or a file)");
  // {"schema_version": 1, "field": ..., "dim": d, "generators": [[[..], ..], ..]}
  json j = json::parse(read_input(g), nullptr, false);
  require(!j.is_discarded() && j.is_object() && j.value("schema_version", 0) == kSchemaVersion &&
              j.contains("field") && j.contains("dim") && j.contains("generators"),
          Reason::ParseError, "group file needs schema_version, field, dim and generators");
  FieldSpec f = FieldSpec::parse(j["field"].get<std::string>());
  std::size_t dim = j["dim"].get<std::size_t>();
  std::vector<Matrix> gens;
  for (const auto& m : j["generators"]) {
    std::vector<std::vector<Scalar>> rows;
    for (const auto& row : m) {
      rows.emplace_back();
      for (const auto& e : row) rows.back().push_back(Scalar::parse(f, e.get<std::string>()));
    }
    gens.push_back(Matrix::from_rows(f, rows));
  }
  return group_closure(f, dim, gens);
}

std::vector<std::array<Scalar, 2>> points(const FieldSpec& f, const std::string& s) {
  std::vector<std::array<Scalar, 2>> out;
  for (const auto& p : split(s, ';')) {
    auto xy = split(p, ',');
    require(xy.size() == 2, Reason::ParseError, "points are written x,y;x,y;...");
    out.push_back({Scalar::parse(f, xy[0]), Scalar::parse(f, xy[1])});
  }
  return out;
}

// ---- commands ----

Result cmd_compose(const Options& o) {
  auto maps = load_maps(o);
  require(maps.size() >= 2, Reason::InvalidArgument, "compose needs at least two maps");
  Endo g = maps.back();
  for (auto it = maps.rbegin() + 1; it != maps.rend(); ++it) g = compose(*it, g);
  return map_result(g);
}

Result rejection(const NotAutomorphism& no) {
  json j{{"automorphism", false}, {"reason", std::string(reason_name(no.reason))}, {"detail", no.detail}};
  return {j, "not an automorphism (" + std::string(reason_name(no.reason)) + "): " + no.detail, kExitRejected};
}

Result cmd_invert(const Options& o) {
  CertResult c = certify_automorphism(one_map(o));
  if (auto* no = std::get_if<NotAutomorphism>(&c)) return rejection(*no);
  return map_result(std::get<AutoCert>(c).inverse);
}

Result cmd_certify(const Options& o) {
  CertResult c = certify_automorphism(one_map(o));
  if (auto* no = std::get_if<NotAutomorphism>(&c)) return rejection(*no);
  const auto& cert = std::get<AutoCert>(c);
  return {{{"automorphism", true}, {"inverse", autofile_json(cert.inverse)}},
          "automorphism; inverse " + cert.inverse.to_string()};
}

Result cmd_factor(const Options& o) {
  TameWord w = jvdk_factorize(plane_map(o));
  json factors = json::array();
  for (const auto& fac : w.factors()) {
    bool affine = std::holds_alternative<AffineMap>(fac);
    factors.push_back({{"group", affine ? "A" : "B"}, {"map", autofile_json(factor_endo(fac))}});
  }
  return {{{"factors", factors}, {"affine_length", w.affine_length()}, {"triangular_length", w.triangular_length()}},
          w.to_string()};
}

Result cmd_length(const Options& o) {
  TameWord w = jvdk_factorize(plane_map(o));
  return {{{"affine_length", w.affine_length()}, {"triangular_length", w.triangular_length()}},
          "affine length " + std::to_string(w.affine_length()) + ", triangular length " +
              std::to_string(w.triangular_length())};
}

Result cmd_mdeg(const Options& o) {
  auto md = multidegree(plane_map(o));
  return {{{"multidegree", md}}, "(" + join_numbers(md) + ")"};
}

Result cmd_classify(const Options& o) {
  Classification c = classify(jvdk_factorize(plane_map(o)));
  std::string kind = c.kind == Classification::Kind::Henon ? "Henon" : "TriangularizableElliptic";
  return {{{"kind", kind}, {"translation_length", c.translation_length}},
          kind + ", translation length " + std::to_string(c.translation_length)};
}

Result cmd_normal_form(const Options& o) {
  ReducedForm nf = normal_form(jvdk_factorize(plane_map(o)));
  json inv = json::array();
  std::vector<std::string> parts{nf.tau1.to_string(), "s"};
  for (const auto& p : nf.involutions) {
    inv.push_back(y_string(p));
    parts.push_back("(-x + " + y_string(p) + ", y)");
    parts.push_back("s");
  }
  parts.push_back(nf.tau2.to_string());
  return {{{"tau1", autofile_json(nf.tau1.to_endo())},
           {"involutions", inv},
           {"tau2", autofile_json(nf.tau2.to_endo())},
           {"affine_length", nf.affine_length()}},
          join(parts, " o ") + "   with s = (y, x)"};
}

Result cmd_wg_check(const Options& o) {
  WGReport r = is_weakly_general(poly_of(o));
  json witness = nullptr;
  std::string text = y_string(r.polynomial) + (r.verdict ? " is weakly general" : " is not weakly general");
  if (r.witness) {
    const auto& [a, b, c] = *r.witness;
    witness = {{"alpha", a.to_string()}, {"beta", b.to_string()}, {"gamma", c.to_string()}};
    text += ", witness (" + a.to_string() + ", " + b.to_string() + ", " + c.to_string() + ")";
  }
  return {{{"polynomial", y_string(r.polynomial)},
           {"field", r.polynomial.field().descriptor()},
           {"weakly_general", r.verdict},
           {"witness", witness},
           {"method", r.method}},
          text + " [" + r.method + "]"};
}

Result cmd_obstruct(const Options& o) { return map_result(obstruction_generator(poly_of(o)).forward); }

Result cmd_sample(const Options& o) {
  SampleReport r = sample_words(poly_of(o), o.kmax, o.trials, o.seed, o.threads);
  json hist = json::object(), trials = json::array();
  std::string text = "seed " + std::to_string(r.seed) + ", " + std::to_string(r.trials.size()) + " trials\n";
  for (auto [len, n] : r.histogram) {
    hist[std::to_string(len)] = n;
    text += "  length " + std::to_string(len) + ": " + std::to_string(n) + "\n";
  }
  for (const auto& t : r.trials)
    trials.push_back({{"index", t.index}, {"k", t.k}, {"word", t.word}, {"affine_length", t.affine_length}});
  return {{{"seed", r.seed}, {"kmax", o.kmax}, {"histogram", hist}, {"trials", trials}}, text};
}

Result cmd_not_member(const Options& o) {
  Endo g = plane_map(o);
  Membership m = non_membership_certificate(g, poly_of(o));
  std::size_t len = affine_length(g);
  std::string verdict = m == Membership::NotInSubgroup ? "NotInSubgroup" : "Unknown";
  return {{{"verdict", verdict}, {"affine_length", len}}, verdict + " (affine length " + std::to_string(len) + ")"};
}

json series_json(const DerivedSeriesReport& r) {
  return {{"orders", r.orders}, {"length", r.length ? json(*r.length) : json(nullptr)}};
}

Result cmd_derived_series(const Options& o) {
  DerivedSeriesReport r = derived_series(load_group(o));
  return {series_json(r), "orders (" + join_numbers(r.orders) + "), derived length " +
                              (r.length ? std::to_string(*r.length) : std::string("none (not solvable)"))};
}

Result cmd_affine_ext(const Options& o) {
  AffineExtensionReport r = affine_extension_series(load_group(o));
  json witness = nullptr;
  if (r.witness_element)
    witness = {{"element", matrix_json(*r.witness_element)}, {"translation", vector_json(*r.witness_translation)}};
  return {{{"base", series_json(r.base)},
           {"stage_spans", r.stage_spans},
           {"cyclic_stage", r.cyclic_stage},
           {"derived_length", r.derived_length},
           {"witness", witness}},
          "derived length of G x plane: " + std::to_string(r.derived_length) + " (first cyclic stage " +
              std::to_string(r.cyclic_stage) + ")"};
}

Result cmd_tri_identities(const Options& o) {
  TriangularIdentityReport r = triangular_identities(field_of(o), o.n, o.trials, o.seed);
  return {{{"n", r.n},
           {"trials", r.trials},
           {"seed", r.seed},
           {"dilatation_checks", r.dilatation_checks},
           {"shift_checks", r.shift_checks},
           {"membership_checks", r.membership_checks}},
          "all identities hold: " + std::to_string(r.dilatation_checks) + " + " + std::to_string(r.shift_checks) +
              " + " + std::to_string(r.membership_checks) + " checks"};
}

Result cmd_nagata(const Options& o) {
  FieldSpec f = field_of(o);
  return map_result(exp_derivation(nagata_derivation(f), Scalar::parse(f, o.t), o.degree_cap));
}

Result cmd_scaling_limit(const Options& o) {
  Endo g = one_map(o);
  std::vector<long long> w;
  for (const auto& s : split(o.weights, ',')) {
    try {
      w.push_back(std::stoll(s));
    } catch (const std::exception&) {
      fail(Reason::ParseError, "bad weight '" + s + "'");
    }
  }
  return map_result(scaling_limit(g, w));
}

Result cmd_move(const Options& o) {
  FieldSpec f = field_of(o);
  return map_result(transitive_move(points(f, o.sources), points(f, o.targets)).forward);
}

Result cmd_in_mr(const Options& o) {
  TameWord w = jvdk_factorize(plane_map(o));
  bool in = in_Mr(w, o.r);
  return {{{"in_Mr", in}, {"r", o.r}, {"multidegree", w.multidegree()}},
          std::string(in ? "in" : "not in") + " M_" + std::to_string(o.r) + ", multidegree (" +
              join_numbers(w.multidegree()) + ")"};
}

void emit(const Result& r, const Options& o, std::ostream& out) {
  if (o.pretty)
    out << r.text << (r.text.empty() || r.text.back() != '\n' ? "\n" : "");
  else
    out << r.data.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact toolkit for polynomial automorphisms of affine space", "polyaut"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--pretty", o.pretty, "Human-readable output instead of JSON");
  app.add_option("--field", o.field, "q, fp:<p> or zeta8 (for inline maps and generated objects)");
  app.add_option("--seed", o.seed, "Seed for randomized commands");
  app.add_option("--trials", o.trials, "Number of random trials");
  app.add_option("--kmax", o.kmax, "Largest number of f letters in sampled words");
  app.add_option("--degree-cap", o.degree_cap, "Degree cap for derivation exponentials");
  app.add_option("--threads", o.threads, "Worker threads for sampling (0 = all cores)");

  std::vector<std::pair<CLI::App*, std::function<Result(const Options&)>>> commands;
  auto add = [&](const char* name, const char* help, auto fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, fn);
    return sub;
  };
  auto map_inputs = [&o](CLI::App* s) {
    s->add_option("inputs", o.inputs, "AutoFile paths ('-' for stdin)");
    s->add_option("-e,--expr", o.exprs, "Inline map as ';'-separated components, e.g. \"x + y^2; y\"");
  };
  map_inputs(add("compose", "Compose maps: first o second o ...", cmd_compose));
  map_inputs(add("invert", "Certified inverse", cmd_invert));
  map_inputs(add("certify", "Decide whether a map is an automorphism", cmd_certify));
  map_inputs(add("factor", "Amalgamated-product factorization of a plane automorphism", cmd_factor));
  map_inputs(add("length", "Affine and triangular length", cmd_length));
  map_inputs(add("mdeg", "Multidegree", cmd_mdeg));
  map_inputs(add("classify", "Elliptic or Henon", cmd_classify));
  map_inputs(add("normal-form", "Reduced expression with involutions", cmd_normal_form));
  add("wg-check", "Weakly general test for p(y)", cmd_wg_check)->add_option("--poly", o.poly, "p(y)");
  add("obstruct", "Build the length-5 element f from p(y)", cmd_obstruct)->add_option("--poly", o.poly, "p(y)");
  add("sample", "Sample words in B and f", cmd_sample)->add_option("--poly", o.poly, "p(y)");
  auto* nm = add("not-member", "Non-membership certificate for <B, f>", cmd_not_member);
  map_inputs(nm);
  nm->add_option("--poly", o.poly, "p(y)");
  add("derived-series", "Derived series of a finite matrix group", cmd_derived_series)
      ->add_option("--group", o.group, "2O, Q8, V4, trivial or a group file");
  add("affine-ext", "Derived length of G x plane", cmd_affine_ext)
      ->add_option("--group", o.group, "2O, Q8, V4, trivial or a group file");
  add("tri-identities", "Commutator identities in the triangular group", cmd_tri_identities)
      ->add_option("--n", o.n, "Dimension");
  add("nagata", "Nagata automorphism f_t", cmd_nagata)->add_option("--t", o.t, "Parameter t");
  auto* sl = add("scaling-limit", "Weighted scaling limit", cmd_scaling_limit);
  map_inputs(sl);
  sl->add_option("--weights", o.weights, "Comma-separated integer weights")->required();
  auto* mv = add("move", "Automorphism sending source points to target points", cmd_move);
  mv->add_option("--sources", o.sources, "x,y;x,y;...")->required();
  mv->add_option("--targets", o.targets, "x,y;x,y;...")->required();
  auto* mr = add("in-mr", "Membership of the multidegree in M_r", cmd_in_mr);
  map_inputs(mr);
  mr->add_option("--r", o.r, "Bound r")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  for (auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    try {
      Result r = fn(o);
      emit(r, o, out);
      return r.code;
    } catch (const Error& e) {
      if (e.is_rejection()) {
        Result r{{{"error", {{"reason", std::string(reason_name(e.reason()))}, {"message", e.what()}}}},
                 std::string(reason_name(e.reason())) + ": " + e.what(),
                 kExitRejected};
        emit(r, o, out);
        return kExitRejected;
      }
      err << reason_name(e.reason()) << ": " << e.what() << "\n";
      return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
      err << "ParseError: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "internal error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  err << "no subcommand given\n";
  return kExitUsage;
}

}  // namespace polyaut::cli
