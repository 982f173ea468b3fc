#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "krawlp/krawlp.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace krawlp;

enum Exit : int { kOk = 0, kAssertion = 1, kUsage = 2, kResource = 3, kSolverAnomaly = 4 };

struct RunConfig {
  unsigned q = 2;
  unsigned n = 3;
  unsigned d = 2;
  std::optional<unsigned> level;
  std::optional<unsigned> k0;
  std::string program = "kraw-pseudo";
  std::string epsilon = "1/2";
  std::string output = "text";
  std::string export_path;
  std::string suite;
  std::size_t max_subspaces = kDefaultSubspaceCap;
  std::size_t max_tuples = kDefaultTupleCap;
  unsigned max_level = kDefaultEscalationCap;
  std::uint64_t seed = 20240521;
  unsigned samples = 100;

  unsigned effective_level() const { return level.value_or(n); }
  bool json() const { return output == "json"; }
};

template <class T>
T env_or(const char* name, T fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return static_cast<T>(v);
  } catch (const std::exception&) {
    throw InputError(std::string(name) + " must be a nonnegative integer, got '" + raw + "'");
  }
}

/// Integers print bare in text mode; JSON always uses p/q.
std::string plain(const Rational& r) {
  return denominator_of(r) == 1 ? numerator_of(r).str() : to_string(r);
}

json basis_rows(const Lattice& lat, SubspaceId id) {
  json rows = json::array();
  for (const auto& v : lat.space(id).basis) rows.push_back(digit_string(v, lat.field().q()));
  return rows;
}

/// Smallest r with r^level = val when val = q^(k*level); otherwise none.
std::optional<Integer> level_root(const Rational& val, unsigned q, unsigned level) {
  if (denominator_of(val) != 1 || val < 1) return std::nullopt;
  Integer rest = numerator_of(val);
  unsigned e = 0;
  while (rest % q == 0) {
    rest /= q;
    ++e;
  }
  if (rest != 1 || e % level != 0) return std::nullopt;
  return ipow(q, e / level);
}

bool is_unsym(const std::string& program) { return program == "kraw-unsym" || program == "partial-unsym"; }

int cmd_oracle(const RunConfig& cfg) {
  const auto inst = Instance::make(cfg.q, cfg.n, cfg.d, 1);
  const auto lat = Lattice::enumerate(inst.field, inst.n, cfg.max_subspaces);
  const auto rep = brute_force_A(inst, lat);
  if (cfg.json()) {
    json j;
    j["A"] = rep.A.str();
    j["k0"] = rep.k0;
    j["witness"] = basis_rows(lat, rep.witness);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "A=" << rep.A << '\n' << "k0=" << rep.k0 << '\n' << "witness:";
    if (rep.k0 == 0) std::cout << " {0}";
    for (const auto& v : lat.space(rep.witness).basis) std::cout << ' ' << digit_string(v, cfg.q);
    std::cout << '\n';
  }
  return kOk;
}

int cmd_bound(const RunConfig& cfg) {
  const auto inst = Instance::make(cfg.q, cfg.n, cfg.d, cfg.effective_level());
  if (is_unsym(cfg.program) && cfg.q != 2) {
    throw UnsupportedFieldError("program " + cfg.program + " is q=2 only (got q=" + std::to_string(cfg.q) + ")");
  }
  const bool weak = cfg.program == "kraw-pseudo-weak" || cfg.program == "full-pseudo-weak";
  if (!is_unsym(cfg.program)) detail::require_pseudo_level(inst);
  const auto lat = Lattice::enumerate(inst.field, inst.n, cfg.max_subspaces);

  unsigned k0 = 0;
  if (weak) k0 = cfg.k0 ? *cfg.k0 : brute_force_A(inst, lat).k0;
  LinearProgram lp;
  if (cfg.program == "kraw-pseudo") lp = build_kraw_pseudo(inst, lat);
  else if (cfg.program == "kraw-pseudo-weak") lp = build_kraw_pseudo_weak(inst, lat, k0);
  else if (cfg.program == "partial-pseudo") lp = build_partial_pseudo(inst, lat);
  else if (cfg.program == "full-pseudo-weak") lp = build_full_pseudo_weak(inst, lat, k0);
  else if (cfg.program == "kraw-unsym") lp = build_unsym_kraw(inst, lat, cfg.max_tuples);
  else lp = build_unsym_partial(inst, lat, cfg.max_tuples);

  if (!cfg.export_path.empty()) {
    std::ofstream out(cfg.export_path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + cfg.export_path + "'");
    out << export_text(lp);
  }

  const auto sol = solve(lp);
  if (sol.status != LpStatus::Optimal) {
    std::cerr << "solver anomaly: status " << to_string(sol.status) << ", certificate " << to_string(sol.certificate)
              << ", rows " << lp.num_constraints() << ", variables " << lp.num_variables() << '\n';
    return kSolverAnomaly;
  }
  const bool certified = verify_optimality(lp, sol);
  const bool kraw_family = cfg.program != "partial-pseudo" && cfg.program != "partial-unsym";
  std::optional<Integer> root;
  if (kraw_family) root = level_root(sol.objective_value, cfg.q, inst.level);

  if (cfg.json()) {
    json j;
    j["program"] = cfg.program;
    j["q"] = cfg.q;
    j["n"] = cfg.n;
    j["d"] = cfg.d;
    j["level"] = inst.level;
    if (weak) j["k0"] = k0;
    j["val"] = to_string(sol.objective_value);
    j["root"] = root ? json(root->str()) : json(nullptr);
    j["rows"] = lp.num_constraints();
    j["variables"] = lp.num_variables();
    j["certificate_verified"] = certified;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "program " << cfg.program << '\n';
    std::cout << "val " << plain(sol.objective_value) << '\n';
    if (root) std::cout << "root " << *root << '\n';
    std::cout << "rows " << lp.num_constraints() << '\n' << "variables " << lp.num_variables() << '\n';
    std::cout << "certificate " << (certified ? "verified" : "FAILED") << '\n';
  }
  return certified ? kOk : kSolverAnomaly;
}

int cmd_verify(const RunConfig& cfg) {
  SuiteParams p;
  p.q = cfg.q;
  p.n = cfg.n;
  p.d = cfg.d;
  p.level = cfg.effective_level();
  p.epsilon = parse_rational(cfg.epsilon);
  p.subspace_cap = cfg.max_subspaces;
  p.tuple_cap = cfg.max_tuples;
  p.level_cap = cfg.max_level;
  p.seed = cfg.seed;
  p.samples = cfg.samples;
  const auto res = run_suite(cfg.suite, p);
  if (cfg.json()) {
    json j;
    j["suite"] = res.name;
    j["pass"] = res.pass();
    j["checks"] = json::array();
    for (const auto& c : res.checks) {
      j["checks"].push_back({{"label", c.label}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    }
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& c : res.checks) {
      std::cout << (c.pass ? "ok   " : "FAIL ") << c.label << ": " << c.lhs << (c.pass ? " == " : " != ") << c.rhs
                << '\n';
    }
    std::cout << res.name << ": " << (res.pass() ? "pass" : "fail") << '\n';
  }
  return res.pass() ? kOk : kAssertion;
}

int cmd_lattice(const RunConfig& cfg) {
  const auto lat = Lattice::enumerate(FieldSpec::of_order(cfg.q), cfg.n, cfg.max_subspaces);
  if (cfg.json()) {
    json arr = json::array();
    for (SubspaceId id : lat.ids()) {
      json e;
      e["id"] = id.index;
      e["dim"] = lat.dim(id);
      e["basis"] = basis_rows(lat, id);
      arr.push_back(e);
    }
    std::cout << arr.dump(2) << '\n';
  } else {
    for (SubspaceId id : lat.ids()) std::cout << dump_line(lat, id) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Exact Krawtchouk LP hierarchies for linear codes over F_q"};
  app.require_subcommand(1);

  try {
    cfg.max_subspaces = env_or<std::size_t>("KRAWLP_MAX_SUBSPACES", cfg.max_subspaces);
    cfg.max_tuples = env_or<std::size_t>("KRAWLP_MAX_TUPLES", cfg.max_tuples);
    cfg.max_level = env_or<unsigned>("KRAWLP_MAX_LEVEL", cfg.max_level);
  } catch (const krawlp::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  auto common = [&](CLI::App* sub, bool with_d) {
    sub->add_option("--q", cfg.q, "field order (prime power <= 256)")->check(CLI::Range(2u, 256u));
    sub->add_option("--n", cfg.n, "blocklength")->check(CLI::PositiveNumber);
    if (with_d) sub->add_option("--d", cfg.d, "minimum distance")->check(CLI::PositiveNumber);
    sub->add_option("--output", cfg.output, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--max-subspaces", cfg.max_subspaces, "subspace enumeration cap");
  };

  auto* oracle = app.add_subcommand("oracle", "brute-force A_q^Lin(n, d)");
  common(oracle, true);

  auto* bound = app.add_subcommand("bound", "solve one program exactly");
  common(bound, true);
  bound->add_option("--level", cfg.level, "hierarchy level (default n)")->check(CLI::PositiveNumber);
  bound->add_option("--program", cfg.program)
      ->check(CLI::IsMember(
          {"kraw-pseudo", "kraw-pseudo-weak", "partial-pseudo", "full-pseudo-weak", "kraw-unsym", "partial-unsym"}));
  bound->add_option("--k0", cfg.k0, "dimension bound for the weak programs (default: oracle)");
  bound->add_option("--export", cfg.export_path, "write the LP in text form");
  bound->add_option("--max-tuples", cfg.max_tuples, "tuple cap for unsymmetrized programs");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify, true);
  verify->add_option("suite", cfg.suite)->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--level", cfg.level, "hierarchy level (default n)")->check(CLI::PositiveNumber);
  verify->add_option("--epsilon", cfg.epsilon, "exact rational in (0, 1)");
  verify->add_option("--max-tuples", cfg.max_tuples);
  verify->add_option("--max-level", cfg.max_level, "escalation level cap");
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--samples", cfg.samples);

  auto* lattice = app.add_subcommand("lattice", "dump the subspace lattice");
  common(lattice, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (oracle->parsed()) return cmd_oracle(cfg);
    if (bound->parsed()) return cmd_bound(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    return cmd_lattice(cfg);
  } catch (const krawlp::ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kResource;
  } catch (const krawlp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
