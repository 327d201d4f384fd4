// sll: command-line front end. Every command prints one JSON document.
// Exit codes: 0 ok, 2 invalid input, 3 I/O failure, 4 internal invariant violation.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sll/deformation.hpp"
#include "sll/json_io.hpp"
#include "sll/random.hpp"
#include "sll/sll.hpp"

namespace {

using sll::json_io::json;
using sll::json_io::schema_error;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int emit(const json& j) {
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int fail(int code, const std::string& kind, const std::string& message) {
  std::cout << json{{"error", json{{"kind", kind}, {"code", code}, {"message", message}}}}.dump(2) << '\n';
  return code;
}

int default_precision(int fallback) {
  const char* env = std::getenv("SLL_PRECISION");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 12) throw schema_error("SLL_PRECISION must be an integer in [1, 12]");
  return static_cast<int>(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("cannot read " + path);
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw schema_error(what + ": invalid JSON: " + e.what());
  }
}

struct RingOptions {
  std::optional<long long> p;
  int m = 1;
  std::optional<int> n;

  sll::WittRing ring(long long default_p, int default_n) const {
    json j{{"p", p.value_or(default_p)}, {"m", m}, {"n", n.value_or(default_precision(default_n))}};
    return sll::json_io::ring_from_json(j);
  }
};

void add_ring_options(CLI::App* cmd, RingOptions& o) {
  cmd->add_option("--p", o.p, "residue characteristic");
  cmd->add_option("--m", o.m, "residue degree, q = p^m")->check(CLI::Range(1, 8));
  cmd->add_option("--n", o.n, "Witt length (default: SLL_PRECISION or command default)")->check(CLI::Range(1, 12));
}

// An element given as an element JSON object, a coefficient list, or an integer.
sll::WittElement parse_element(const std::string& text, const RingOptions& o) {
  const json j = parse_json(text, "element");
  if (j.is_object()) {
    if (!j.contains("p") && o.p) {
      const sll::WittRing r = o.ring(2, 2);
      return sll::json_io::element_from_json(j, &r);
    }
    return sll::json_io::element_from_json(j);
  }
  if (!o.p) throw schema_error("element \"" + text + "\" needs --p (or an element object with a ring)");
  return sll::json_io::scalar_from_json(o.ring(2, 2), j);
}

json element_report(const sll::WittElement& a) {
  return json{{"element", sll::json_io::element_to_json(a)},
              {"digits", sll::json_io::digits_to_json(a)},
              {"valuation", sll::valuation(a)}};
}

// ---------------------------------------------------------------------------

struct WittArgs {
  std::string op;
  std::vector<std::string> operands;
  RingOptions ring;
  int power = 1;
};

int run_witt(const WittArgs& a) {
  std::vector<sll::WittElement> xs;
  for (const auto& s : a.operands) xs.push_back(parse_element(s, a.ring));
  const std::size_t arity = (a.op == "add" || a.op == "mul") ? 2 : 1;
  if (xs.size() != arity) throw schema_error("witt " + a.op + " takes " + std::to_string(arity) + " operand(s)");
  if (arity == 2 && !(xs[0].ring() == xs[1].ring())) throw schema_error("operands live in different rings");
  sll::WittElement r = xs[0];
  if (a.op == "add") r = xs[0] + xs[1];
  if (a.op == "mul") r = xs[0] * xs[1];
  if (a.op == "frob") r = sll::frobenius(xs[0], a.power);
  json out{{"op", a.op}};
  const json rep = element_report(r);
  for (const auto& [k, v] : rep.items()) out[k] = v;
  return emit(out);
}

// ---------------------------------------------------------------------------

struct SeriesArgs {
  std::string file;
  std::optional<int> degree;
  RingOptions ring;
  std::optional<int> nvars;
  bool strict = false;
};

// JSON series document, or plain text with the ring given by flags.
sll::TruncatedSeries load_series(const SeriesArgs& a) {
  const std::string text = read_file(a.file);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return sll::json_io::series_from_json(parse_json(text, a.file), a.degree);
  if (!a.ring.p) throw schema_error("text series input needs --p");
  const sll::WittRing r = a.ring.ring(2, 3);
  int nvars = a.nvars.value_or(0);
  if (!a.nvars) {
    // Largest index among x1, x2, ... appearing in the text.
    for (std::size_t i = 0; i + 1 < text.size(); ++i)
      if (text[i] == 'x' && std::isdigit(static_cast<unsigned char>(text[i + 1])))
        nvars = std::max(nvars, std::atoi(text.c_str() + i + 1));
    if (nvars < 1) throw schema_error("cannot infer the number of variables; pass --nvars");
  }
  const sll::SeriesRing ring(r, nvars, a.degree.value_or(sll::default_truncation_degree(r.p())));
  return sll::parse_series(ring, text);
}

int run_series_reduce(const SeriesArgs& a) {
  const sll::TruncatedSeries f = load_series(a);
  json out{{"input", sll::json_io::series_to_json(f)}};
  const sll::LocalRingClass cls = sll::classify_local_ring(f);
  const json cj = sll::json_io::local_class_to_json(cls);
  for (const auto& [k, v] : cj.items()) out[k] = v;
  if (cls.tag != sll::LocalRingTag::OrdinaryDoublePoint && !a.strict) return emit(out);
  const auto res = a.strict ? sll::normal_form(f) : sll::reduce_to_normal_form(f);
  if (const auto* nf = std::get_if<sll::NormalFormResult>(&res)) {
    if (!sll::verify_certificate(f, *nf)) throw sll::invariant_violation("normal form certificate failed");
    out["normal_form"] = sll::json_io::normal_form_to_json(*nf);
    out["certificate_verified"] = true;
  }
  return emit(out);
}

// ---------------------------------------------------------------------------

struct ModuleArgs {
  std::string op;
  std::optional<std::string> fixture;
  std::optional<std::string> file;
  RingOptions ring;
  std::optional<std::string> frame;
  std::optional<int> degree;
  std::size_t budget = 5'000'000;
};

sll::DieudonneModule load_module(const ModuleArgs& a) {
  if (a.fixture && a.file) throw schema_error("give either --fixture or --file, not both");
  if (a.file) return sll::json_io::module_from_json(parse_json(read_file(*a.file), *a.file));
  const std::string name = a.fixture.value_or("");
  const auto c = sll::parse_standard_case(name);
  if (!c) throw schema_error("unknown fixture \"" + name + "\" (iia, iib, ordinary, lagrangian_generic, supersingular)");
  return sll::make_standard(a.ring.ring(3, 3), *c);
}

json validation_json(const sll::ValidationReport& v) {
  return json{{"valid", v.ok()},
              {"checks",
               json{{"fv_is_p", v.fv_is_p},
                    {"vf_is_p", v.vf_is_p},
                    {"alternating", v.alternating},
                    {"degree_p_squared", v.degree_p_squared},
                    {"compatible", v.compatible}}},
              {"pairing_divisors", v.pairing_divisors},
              {"failures", v.failures}};
}

void require_valid(const sll::DieudonneModule& m) {
  const auto v = sll::validate(m);
  if (!v.fv_is_p || !v.vf_is_p || !v.alternating || !v.compatible) {
    std::string msg = "invalid Dieudonne module:";
    for (const auto& f : v.failures) msg += " " + f + ";";
    throw schema_error(msg);
  }
}

int run_dieudonne(const ModuleArgs& a) {
  if (!a.fixture && !a.file) throw schema_error("give --fixture NAME or --file F");
  const sll::DieudonneModule m = load_module(a);
  if (a.op == "validate") {
    json out = validation_json(sll::validate(m));
    out["module"] = sll::json_io::module_to_json(m);
    return emit(out);
  }
  require_valid(m);
  if (a.op == "invariants") {
    return emit(json{{"a_number", sll::a_number(m)},
                     {"p_rank", sll::p_rank(m)},
                     {"kernel_type", sll::to_string(sll::kernel_type(m))}});
  }
  if (a.op == "dual") {
    const sll::Matrix b = sll::dual_lattice(m);
    const sll::Matrix expected = m.ring().from_int(m.ring().p()) * sll::Matrix::identity(m.ring(), 4);
    return emit(json{{"dual_basis", sll::json_io::matrix_to_json(b)},
                     {"contract_verified", b.transpose() * m.J() == expected}});
  }
  const sll::WitnessSearchResult res = sll::lagrangian_witness_search(m, a.budget);
  json out{{"found", res.witness.has_value()}, {"precision", res.precision}, {"nodes", res.nodes}, {"report", res.report}};
  if (res.witness) {
    json t = json::array();
    for (const auto& row : res.witness->t) t.push_back(json{sll::json_io::scalar_to_json(row[0]),
                                                             sll::json_io::scalar_to_json(row[1])});
    out["witness"] = json{{"basis", sll::json_io::matrix_to_json(res.witness->basis)},
                          {"chart", t},
                          {"verified", sll::is_lagrangian_witness(m, res.witness->basis)}};
  }
  return emit(out);
}

std::array<std::size_t, 2> parse_frame(const std::string& s) {
  std::array<std::size_t, 2> y{};
  char comma = 0;
  std::istringstream in(s);
  if (!(in >> y[0] >> comma >> y[1]) || comma != ',' || !in.eof() || y[0] > 3 || y[1] > 3)
    throw schema_error("--frame expects two basis indices i,j in 0..3");
  return y;
}

int run_deform(const ModuleArgs& a) {
  if (!a.fixture && !a.file) throw schema_error("give --fixture NAME or --file F");
  const sll::DieudonneModule m = load_module(a);
  require_valid(m);
  std::optional<std::array<std::size_t, 2>> y;
  if (a.frame) y = parse_frame(*a.frame);
  const sll::HodgeFrame fr = sll::make_frame(m, y);
  const sll::TruncatedSeries f = sll::deformation_equation(fr, a.degree);
  json out{{"relation", f.to_string()},
           {"frame", json{{"Y", fr.y}, {"X", fr.x}}},
           {"relation_series", sll::json_io::series_to_json(f)}};
  const json cj = sll::json_io::local_class_to_json(sll::classify_local_ring(f));
  for (const auto& [k, v] : cj.items()) out[k] = v;
  return emit(out);
}

// ---------------------------------------------------------------------------

struct LocalModelArgs {
  std::string op;
  long long q = 0;
  std::optional<int> n;
};

int run_local_model(const LocalModelArgs& a) {
  if (a.q < 2 || a.q > 9) throw schema_error("--q must be a prime power in [2, 9]");
  const sll::WittRing k = sll::field_of_order(a.q);
  json out{{"q", a.q}};
  if (a.op == "chart") {
    const sll::WittRing r = k.with_precision(a.n.value_or(default_precision(3)));
    const sll::TruncatedSeries f = sll::chart_equation(r);
    const sll::SeriesRing work(r, 4, sll::default_truncation_degree(r.p()), f.ring().names());
    const sll::TruncatedSeries mod_p = sll::change_coefficient_ring(f, f.ring().with_coeff_ring(k));
    out["center"] = sll::json_io::plane_to_json(sll::distinguished_point(k));
    out["relation"] = f.to_string();
    out["relation_mod_p"] = mod_p.to_string();
    out["relation_series"] = sll::json_io::series_to_json(f);
    const json cj = sll::json_io::local_class_to_json(
        sll::classify_local_ring(sll::change_coefficient_ring(f, work)));
    for (const auto& [key, v] : cj.items()) out[key] = v;
    return emit(out);
  }
  const auto pts = sll::enumerate_special_fiber(a.q);
  out["count"] = pts.size();
  json arr = json::array();
  json sing = json::array();
  for (const auto& pl : pts) {
    if (a.op == "points") {
      arr.push_back(sll::json_io::plane_to_json(pl));
      continue;
    }
    const int d = sll::tangent_dimension(pl);
    arr.push_back(json{{"basis", sll::json_io::plane_to_json(pl)}, {"tangent_dimension", d}});
    if (d == 4) sing.push_back(sll::json_io::plane_to_json(pl));
  }
  out["points"] = arr;
  if (a.op == "tangents") out["singular_points"] = sing;
  return emit(out);
}

// ---------------------------------------------------------------------------

struct SelfcheckArgs {
  std::uint64_t seed = 1;
  int trials = 50;
};

// Randomized consistency checks; identical seeds give identical output.
int run_selfcheck(const SelfcheckArgs& a) {
  std::mt19937_64 rng(a.seed);
  json checks = json::object();
  int failures = 0;
  auto record = [&](const std::string& name, int bad) {
    checks[name] = json{{"trials", a.trials}, {"failures", bad}};
    failures += bad;
  };
  for (const auto& r : {sll::WittRing::make(2, 1, 3), sll::WittRing::make(3, 2, 2), sll::WittRing::make(5, 1, 3)}) {
    const std::string tag = "W" + std::to_string(r.n()) + "(F" + std::to_string(r.q()) + ")";
    int bad = 0;
    for (int t = 0; t < a.trials; ++t) {
      const auto x = r.random(rng), y = r.random(rng), z = r.random(rng);
      if (!((x + y) * z == x * z + y * z) || !(sll::frobenius(x * y) == sll::frobenius(x) * sll::frobenius(y)))
        ++bad;
      const auto d = sll::digits(x);
      if (!(sll::from_digits(r, d) == x)) ++bad;
    }
    record("ring_axioms " + tag, bad);
  }
  for (const auto& r : {sll::WittRing::make(2, 1, 3), sll::WittRing::make(3, 2, 2)}) {
    const sll::SeriesRing ring(r, 4, 6);
    int bad = 0;
    for (int t = 0; t < a.trials; ++t) {
      const auto f = sll::random_series(ring, {}, rng);
      const auto res = sll::reduce_to_normal_form(f);
      const auto& nf = std::get<sll::NormalFormResult>(res);
      if (!sll::verify_certificate(f, nf)) ++bad;
    }
    record("normal_form_certificate W" + std::to_string(r.n()) + "(F" + std::to_string(r.q()) + ")", bad);
  }
  emit(json{{"seed", a.seed}, {"checks", checks}, {"failures", failures}});
  return failures == 0 ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact local computations: Witt rings, Dieudonne modules, normal forms, local models"};
  app.require_subcommand(1);

  WittArgs witt;
  auto* witt_cmd = app.add_subcommand("witt", "Arithmetic in W_n(F_q)");
  witt_cmd->add_option("op", witt.op, "add | mul | frob | digits")
      ->required()
      ->check(CLI::IsMember({"add", "mul", "frob", "digits"}));
  witt_cmd->add_option("operands", witt.operands, "element JSON, coefficient list, or integer")->required();
  witt_cmd->add_option("--power", witt.power, "Frobenius power for frob");
  add_ring_options(witt_cmd, witt.ring);

  SeriesArgs series;
  auto* series_cmd = app.add_subcommand("series-reduce", "Classify and reduce a power series to a' + Q'");
  series_cmd->add_option("file", series.file, "series JSON, or plain text with --p/--n")->required();
  series_cmd->add_option("--degree", series.degree, "truncation degree D")->check(CLI::Range(3, 32));
  series_cmd->add_option("--nvars", series.nvars, "number of variables for text input")->check(CLI::Range(1, 16));
  series_cmd->add_flag("--strict", series.strict, "require constant in m, linear terms in m^2");
  add_ring_options(series_cmd, series.ring);

  ModuleArgs dieu;
  auto* dieu_cmd = app.add_subcommand("dieudonne", "Quasi-polarized Dieudonne module invariants");
  dieu_cmd->add_option("op", dieu.op, "validate | invariants | dual | lagrangian-search")
      ->required()
      ->check(CLI::IsMember({"validate", "invariants", "dual", "lagrangian-search"}));
  dieu_cmd->add_option("--fixture", dieu.fixture, "iia | iib | ordinary | lagrangian_generic | supersingular");
  dieu_cmd->add_option("--file", dieu.file, "module JSON");
  dieu_cmd->add_option("--budget", dieu.budget, "node budget for lagrangian-search");
  add_ring_options(dieu_cmd, dieu.ring);

  ModuleArgs deform;
  auto* deform_cmd = app.add_subcommand("deform", "Deformation relation and local ring type");
  deform_cmd->add_option("--fixture", deform.fixture, "iia | iib | ordinary | lagrangian_generic | supersingular");
  deform_cmd->add_option("--file", deform.file, "module JSON");
  deform_cmd->add_option("--frame", deform.frame, "Y basis indices i,j (default: first pair spanning VM/pM)");
  deform_cmd->add_option("--degree", deform.degree, "truncation degree D")->check(CLI::Range(3, 32));
  add_ring_options(deform_cmd, deform.ring);

  LocalModelArgs lm;
  auto* lm_cmd = app.add_subcommand("local-model", "Special fiber of the paramodular local model");
  lm_cmd->add_option("op", lm.op, "points | tangents | chart")
      ->required()
      ->check(CLI::IsMember({"points", "tangents", "chart"}));
  lm_cmd->add_option("--q", lm.q, "residue field size")->required();
  lm_cmd->add_option("--n", lm.n, "Witt length for chart")->check(CLI::Range(1, 12));

  SelfcheckArgs sc;
  auto* sc_cmd = app.add_subcommand("selfcheck", "Randomized consistency checks");
  sc_cmd->add_option("--seed", sc.seed, "random seed");
  sc_cmd->add_option("--trials", sc.trials, "trials per check")->check(CLI::Range(1, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitInvalid, "usage", e.what());
  }

  try {
    if (*witt_cmd) return run_witt(witt);
    if (*series_cmd) return run_series_reduce(series);
    if (*dieu_cmd) return run_dieudonne(dieu);
    if (*deform_cmd) return run_deform(deform);
    if (*lm_cmd) return run_local_model(lm);
    if (*sc_cmd) return run_selfcheck(sc);
  } catch (const io_error& e) {
    return fail(kExitIo, "io", e.what());
  } catch (const sll::invariant_violation& e) {
    return fail(kExitInternal, "invariant_violation", e.what());
  } catch (const sll::unsupported_characteristic& e) {
    return fail(kExitInvalid, "unsupported_characteristic", e.what());
  } catch (const sll::precondition_error& e) {
    return fail(kExitInvalid, "validation", e.what());
  } catch (const sll::domain_error& e) {
    return fail(kExitInvalid, "domain", e.what());
  } catch (const std::exception& e) {
    return fail(kExitInternal, "internal", e.what());
  }
  return fail(kExitInvalid, "usage", "no command");
}
