// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <wsym/errors.hpp>
#include <wsym/generators.hpp>
#include <wsym/moser.hpp>
#include <wsym/tower.hpp>
#include <wsym_cli/config.hpp>
#include <wsym_cli/runner.hpp>
#include <wsym_cli/spec.hpp>

#include "oracles.hpp"

using namespace wsym;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && pass) detail = what;
    pass = pass && cond;
  }
};

fs::path g_configs = "configs";

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Mat random_orthogonal(Rng& rng, int n) {
  Eigen::HouseholderQR<Mat> qr(random_gaussian(rng, n, n));
  return qr.householderQ() * Mat::Identity(n, n);
}

// Well-conditioned invertible matrix: singular values in [0.5, 2].
Mat random_invertible(Rng& rng, int n) {
  Vec s(n);
  for (int i = 0; i < n; ++i) s(i) = 0.5 + 1.5 * random_uniform(rng);
  return random_orthogonal(rng, n) * s.asDiagonal() * random_orthogonal(rng, n);
}

ModelSpace random_space(Rng& rng, int n) {
  if (random_uniform(rng) < 0.5) return ModelSpace(n);
  const Mat p = random_invertible(rng, n);
  return ModelSpace(Mat(p.transpose() * p));
}

Mat random_symplectic_matrix(Rng& rng, int n) {
  const Mat p = random_invertible(rng, n);
  return p.transpose() * darboux_constant_form(n / 2).matrix() * p;
}

Subspace random_subspace(Rng& rng, const ModelSpace& s, int k) {
  return Subspace(s, random_gaussian(rng, s.dim(), k));
}

// Source form and map making ℓ : E_src → E_tgt a passing weak isometry:
// in adapted coordinates E_src = E_tgt ⊕ K, ω_src = ω_tgt ⊕ ω_K.
struct IsometryPair {
  LinearMap map;
  SkewForm source;
};

IsometryPair random_weak_isometry(Rng& rng, const SkewForm& target, int extra) {
  const int m = target.dim();
  const int n = m + extra;
  const Mat p = random_invertible(rng, n);
  Mat block = Mat::Zero(n, n);
  block.topLeftCorner(m, m) = target.matrix();
  if (extra > 0) block.bottomRightCorner(extra, extra) = random_symplectic_matrix(rng, extra);
  Mat proj = Mat::Zero(m, n);
  proj.leftCols(m) = Mat::Identity(m, m);
  const ModelSpace src = random_space(rng, n);
  return {LinearMap(src, target.space(), proj * p), SkewForm(src, p.transpose() * block * p)};
}

Outcome linear_algebra_suite() {
  Outcome o;
  Rng rng(20240601);
  const double tol = 1e-10;
  for (int inst = 0; inst < 500; ++inst) {
    const std::string tag = "instance " + std::to_string(inst);
    const int half0 = 1 + static_cast<int>(random_uniform(rng) * 3);
    const int ext1 = 2 * static_cast<int>(random_uniform(rng) * 3);
    const int ext2 = 2 * static_cast<int>(random_uniform(rng) * 3);
    const int n0 = 2 * half0;
    const ModelSpace e0 = random_space(rng, n0);
    const SkewForm w0(e0, random_symplectic_matrix(rng, n0));

    const IsometryPair l1 = random_weak_isometry(rng, w0, ext1);
    const IsometryPair l2 = random_weak_isometry(rng, l1.source, ext2);
    const SkewForm& w1 = l1.source;
    const SkewForm& w2 = l2.source;
    const int n2 = w2.dim();

    // Skewness is preserved by pullback and restriction.
    const LinearMap any(ModelSpace(n2), w1.space(), random_gaussian(rng, w1.dim(), n2));
    o.expect(skew_defect(pullback_form(any, w1).matrix()) <= tol, tag + ": pullback lost skewness");
    const Subspace k = random_subspace(rng, w2.space(), 1 + static_cast<int>(random_uniform(rng) * (n2 - 1)));
    o.expect(skew_defect(restrict_form(w2, k).matrix()) <= tol, tag + ": restriction lost skewness");

    // (K^⊥)^⊥ = K and (K + K′)^⊥ = K^⊥ ∩ K′^⊥.
    o.expect(symplectic_orthogonal(w2, symplectic_orthogonal(w2, k)) == k, tag + ": double orthogonal");
    const Subspace k2 = random_subspace(rng, w2.space(), 1 + static_cast<int>(random_uniform(rng) * (n2 - 1)));
    const Subspace sum(w2.space(), subspace_sum(k.basis(), k2.basis()));
    const Subspace lhs = symplectic_orthogonal(w2, sum);
    const Mat inter = subspace_intersection(symplectic_orthogonal(w2, k).basis(),
                                            symplectic_orthogonal(w2, k2).basis());
    o.expect(lhs == Subspace(w2.space(), inter), tag + ": orthogonal of a sum");

    // ker(ℓ*ω′) = ker ℓ for passing weak isometries, and composites still pass.
    const WeakIsometryReport r1 = check_weak_isometry(l1.map, w1, w0, tol);
    const WeakIsometryReport r2 = check_weak_isometry(l2.map, w2, w1, tol);
    o.expect(r1.ok && r2.ok, tag + ": constructed isometry rejected");
    o.expect(kernel(pullback_form(l1.map, w0)) == kernel(l1.map), tag + ": ker of pullback");
    o.expect(kernel(pullback_form(l2.map, w1)) == kernel(l2.map), tag + ": ker of pullback");
    o.expect(check_weak_isometry(compose(l1.map, l2.map), w2, w0, tol).ok, tag + ": composite not an isometry");
  }
  o.detail = o.pass ? "500 instances, dims <= 16" : o.detail;
  return o;
}

Outcome decomposition_oracle() {
  Outcome o;
  Rng rng(77);
  int checked = 0;
  for (int depth = 0; depth <= 5; ++depth) {
    for (int rep = 0; rep < 4; ++rep) {
      std::vector<SkewForm> factors;
      std::vector<int> offsets{0};
      for (int k = 0; k <= depth; ++k) {
        const int dim = 2 * (1 + static_cast<int>(random_uniform(rng) * 2));
        factors.emplace_back(ModelSpace(dim), rep == 0 ? darboux_constant_form(dim / 2).matrix()
                                                       : random_symplectic_matrix(rng, dim));
        offsets.push_back(offsets.back() + dim);
      }
      const FormSequence fs = make_product_tower(factors);
      for (int i = 0; i <= depth; ++i) {
        for (int j = i; j <= depth; ++j) {
          const std::string tag =
              "depth " + std::to_string(depth) + " (" + std::to_string(i) + "," + std::to_string(j) + ")";
          const BlockDecomposition bd = block_decompose(fs, i, j);
          const ModelSpace& top = fs.tower().level(j);
          // Expected blocks: the first i+1 factors together, then one factor each.
          std::vector<Subspace> expected;
          auto coords = [&](int from, int to) {
            Mat b = Mat::Zero(top.dim(), offsets[to] - offsets[from]);
            b.block(offsets[from], 0, b.cols(), b.cols()) = Mat::Identity(b.cols(), b.cols());
            return Subspace(top, b);
          };
          expected.push_back(coords(0, i + 1));
          for (int l = i + 1; l <= j; ++l) expected.push_back(coords(l, l + 1));
          o.expect(bd.blocks.size() == expected.size(), tag + ": block count");
          for (std::size_t b = 0; b < std::min(bd.blocks.size(), expected.size()); ++b)
            o.expect(bd.blocks[b] == expected[b], tag + ": block " + std::to_string(b));
          o.expect(audit_block_decomposition(fs, bd).ok(1e-10), tag + ": audit");
          // Brute force: the last block is ker ℓ_{j−1}^j and the rest is its orthogonal.
          if (j > i) {
            const Subspace ker = kernel(fs.tower().bonding(j - 1));
            o.expect(bd.blocks.back() == ker, tag + ": kernel block");
            const Subspace perp = symplectic_orthogonal(fs.form(j), ker);
            Mat rest(top.dim(), 0);
            for (std::size_t b = 0; b + 1 < bd.blocks.size(); ++b) {
              Mat next(top.dim(), rest.cols() + bd.blocks[b].dim());
              next << rest, bd.blocks[b].basis();
              rest = next;
            }
            o.expect(Subspace(top, rest) == perp, tag + ": complement blocks");
          }
          ++checked;
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " (i,j) decompositions on product towers of depth <= 5";
  return o;
}

Mat d_of_primitive(const FormField& bar, const Vec& x, const QuadratureRule& rule, double h) {
  const int n = static_cast<int>(x.size());
  Mat jac(n, n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = h;
    jac.col(i) = (radial_primitive(bar, x + e, rule) - radial_primitive(bar, x - e, rule)) / (2 * h);
  }
  return jac.transpose() - jac;
}

Outcome primitive_correctness() {
  Outcome o;
  MarsdenSpec m3 = default_marsden_spec(3);
  m3.shift_k = 2;
  const std::vector<std::pair<std::string, FormField>> fields = {
      {"perturbed Darboux R^4", make_perturbed_darboux_field(2, 0.3, 1)},
      {"perturbed Darboux R^6", make_perturbed_darboux_field(3, 0.3, 2)},
      {"Marsden R^4", make_marsden_field(default_marsden_spec(2))},
      {"Marsden R^6", make_marsden_field(m3)},
      {"counterexample level 2 R^4", make_counterexample_tower(1, 2, Vec::Ones(1), {1.0}).fields[1]},
  };
  Rng rng(31);
  double worst = 0.0;
  for (const auto& [name, field] : fields) {
    o.expect(exterior_derivative_residual(field, 20, 1).residual <= 1e-6, name + ": not closed");
    const MoserFamily fam(field, Vec::Zero(field.dim()));
    const double r = 0.8 * fam.radius();
    for (int p = 0; p < 200; ++p) {
      const Vec x = r * std::pow(random_uniform(rng), 1.0 / field.dim()) * random_unit(rng, field.dim());
      const double err = max_abs(d_of_primitive(fam.omega_bar(), x, fam.rule(), 1e-5) - fam.omega_bar()(x));
      worst = std::max(worst, err);
      o.expect(err <= 1e-6, name + ": d(alpha) differs from the field by " + fmt("%.3g", err));
    }
  }
  if (o.pass) o.detail = "5 fields x 200 points, max |d(alpha) - omega_bar| = " + fmt("%.3g", worst);
  return o;
}

cli::RunOutcome run_config(const std::string& name) {
  return cli::execute(cli::load_config((g_configs / name).string()));
}

Outcome moser_darboux() {
  Outcome o;
  const cli::RunOutcome out = run_config("moser-perturbed.json");
  o.expect(out.exit_code == cli::kPass, "moser run exited " + std::to_string(out.exit_code));
  if (!out.report.contains("result")) return o;
  const auto& r = out.report["result"];
  const double res = r["pullback_residual"].get<double>();
  const double drift = r["base_drift"].get<double>();
  const double ratio = r["order_check"]["ratio"].get<double>();
  const auto order_dt = r["order_check"]["dt"].get<std::vector<double>>();
  o.expect(out.report["tolerances"]["dt"].get<double>() == 1e-3, "dt is not 1e-3");
  o.expect(res <= 1e-5, "pullback residual " + fmt("%.3g", res));
  o.expect(ratio >= 8.0, "halving ratio " + fmt("%.3g", ratio));
  o.expect(drift <= 1e-8, "base drift " + fmt("%.3g", drift));
  if (o.pass)
    o.detail = "residual " + fmt("%.3g", res) + ", halving ratio " + fmt("%.4g", ratio) + " (dt " + fmt("%g", order_dt[0]) + " -> " +
               fmt("%g", order_dt[1]) + "), base drift " +
               fmt("%.3g", drift);
  return o;
}

Outcome product_case() {
  Outcome o;
  const cli::RunConfig cfg = cli::load_config((g_configs / "product-control.json").string());
  const cli::SpecDocument spec = cli::load_spec(cfg.input.string());
  o.expect(spec.sequence && spec.sequence->size() == 10, "spec is not a 10-level tower");
  if (!spec.sequence) return o;
  o.expect(check_compatible_sequence(*spec.sequence, 1e-10).ok, "compatibility failed");
  const cli::RunOutcome out = cli::execute(cfg);
  o.expect(out.exit_code == cli::kPass, "product-control exited " + std::to_string(out.exit_code));
  if (!out.report.contains("result")) return o;
  const auto& r = out.report["result"];
  o.expect(r["full_balls"].get<bool>(), "charts are not full balls");
  o.expect(r["assembly"]["ok"].get<bool>(), "assembly not ok");
  const auto radii = r["assembly"]["projected_radius"].get<std::vector<double>>();
  for (double x : radii) o.expect(x == radii.front(), "radii not constant");
  const double e = r["exponent"].get<double>();
  o.expect(std::abs(e) <= 0.05, "exponent " + fmt("%.3g", e));
  if (o.pass) o.detail = "10 levels compatible, radii " + fmt("%.3g", radii.front()) + ", exponent " + fmt("%.3g", e);
  return o;
}

Outcome counterexample_case() {
  Outcome o;
  const cli::RunOutcome out = run_config("shrink.json");
  o.expect(out.exit_code == cli::kPass, "shrink exited " + std::to_string(out.exit_code));
  if (!out.report.contains("result")) return o;
  const auto& r = out.report["result"];
  const auto& rows = r["rows"];
  o.expect(rows.size() == 10, "expected 10 rows");
  double prev = INFINITY;
  for (const auto& row : rows) {
    const int n = row["n"].get<int>();
    const double rv = row["r_validity"].get<double>();
    o.expect(rv <= 1.0 / n, "r_validity(" + std::to_string(n) + ") = " + fmt("%.6g", rv) + " > 1/n");
    o.expect(rv < prev, "radii not strictly decreasing at n=" + std::to_string(n));
    prev = rv;
  }
  const double e = r["exponent"].get<double>();
  o.expect(e <= -0.5, "exponent " + fmt("%.3g", e));
  o.expect(!r["assembly"]["ok"].get<bool>() && r["pldc"] == "fails", "(PLDC) failure not reported");
  const auto& levels = r["uniform_bounds"]["per_level"];
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    o.expect(levels[i]["forward_norm"].get<double>() <= 4.0, "forward norm above 4");
    o.expect(levels[i]["inverse_norm"].get<double>() >= n * n / 2.0, "inverse norm below n^2/2");
    o.expect(std::abs(levels[i]["inverse_norm"].get<double>() / oracle::kShrinkInverseNorm[i] - 1.0) <= 1e-9,
             "inverse norm differs from the independent value");
  }
  if (o.pass)
    o.detail = "r(1) = " + fmt("%.4g", rows.front()["r_validity"].get<double>()) + ", r(10) = " +
               fmt("%.4g", rows.back()["r_validity"].get<double>()) + ", exponent " + fmt("%.4g", e) +
               ", inverse norm at n=10 " + fmt("%.4g", levels.back()["inverse_norm"].get<double>());
  return o;
}

Outcome loop_tower() {
  Outcome o;
  const cli::RunOutcome out = run_config("loop-check.json");
  o.expect(out.exit_code == cli::kPass, "loop-check exited " + std::to_string(out.exit_code));
  if (!out.report.contains("result")) return o;
  const auto& r = out.report["result"];
  o.expect(r["ilb"].get<bool>() && r["compatible"].get<bool>(), "not ILB-compatible");
  o.expect(r["max_pullback_residual"].get<double>() <= 1e-12, "pullback residual above 1e-12");
  o.expect(r["identity_charts"].get<bool>(), "charts are not the identity");
  const auto& levels = r["levels"];
  o.expect(levels.size() == 4, "expected orders 0..3");
  for (std::size_t i = 0; i < levels.size() && i < 4; ++i) {
    const double k = levels[i]["kappa"].get<double>();
    o.expect(std::abs(k / oracle::kLoopKappa[i] - 1.0) <= 1e-9, "kappa at order " + std::to_string(i));
  }
  if (o.pass) o.detail = "kappa = 65^k for k = 0..3, identity charts";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("wsym-acceptance-" + std::to_string(::getpid()));
  int files = 0;
  for (const std::string name : {"moser-perturbed.json", "shrink.json"}) {
    const cli::RunConfig cfg = cli::load_config((g_configs / name).string());
    const fs::path a = root / (name + ".a"), b = root / (name + ".b");
    cli::write_outputs(cli::execute(cfg), a, cli::kFormats);
    cli::write_outputs(cli::execute(cfg), b, cli::kFormats);
    for (const auto& entry : fs::directory_iterator(a)) {
      const fs::path other = b / entry.path().filename();
      o.expect(fs::exists(other) && slurp(entry.path()) == slurp(other),
               name + ": " + entry.path().filename().string() + " differs");
      ++files;
    }
  }
  fs::remove_all(root);
  if (o.pass) o.detail = std::to_string(files) + " report files byte-identical across repeated runs";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--configs") g_configs = argv[i + 1];

  const std::vector<Criterion> criteria = {
      {1, "linear-algebra suite", 10, linear_algebra_suite},
      {2, "decomposition oracle", 5, decomposition_oracle},
      {3, "primitive correctness", 30, primitive_correctness},
      {4, "Moser/Darboux chart", 60, moser_darboux},
      {5, "product tower", 30, product_case},
      {6, "counterexample tower", 300, counterexample_case},
      {7, "loop tower", 10, loop_tower},
      {8, "determinism", 600, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += " (over the " + fmt("%.0f", c.budget_s) + " s budget)";
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s [%.2f s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
