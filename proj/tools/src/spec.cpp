#include "wsym_cli/spec.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <wsym/errors.hpp>
#include <wsym/linalg.hpp>

namespace wsym::cli {

std::string to_string(SpecKind k) {
  switch (k) {
    case SpecKind::Explicit: return "explicit";
    case SpecKind::Product: return "product";
    case SpecKind::Loop: return "loop";
    case SpecKind::Counterexample: return "counterexample";
    case SpecKind::Marsden: return "marsden";
    case SpecKind::PerturbedDarboux: return "perturbed-darboux";
  }
  return "?";
}

namespace {

Mat to_mat(const json& j) {
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) m(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
  return m;
}

std::vector<double> to_vec(const json& j) { return j.get<std::vector<double>>(); }

Vec to_eigen(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void check_skew(Checker& c, const std::string& ptr, const Mat& m, const std::string& what) {
  const double defect = skew_defect(m);
  if (defect > 1e-12) c.error(ptr, what + " is not skew: symmetry defect " + fmt(defect));
}

void check_gram(Checker& c, const std::string& ptr, const Mat& g) {
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    c.error(ptr, "gram is not symmetric");
    return;
  }
  if (Eigen::LLT<Mat>(g).info() != Eigen::Success) c.error(ptr, "gram is not positive definite");
}

void check_spectrum(Checker& c, const std::string& p, bool allow_zero) {
  if (!c.number_array(p)) return;
  const auto s = to_vec(*c.get(p));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0.0 || (!allow_zero && s[i] == 0.0)) c.error(child(p, i), allow_zero ? "must be >= 0" : "must be > 0");
    if (i > 0 && s[i] > s[i - 1]) c.error(child(p, i), "spectrum must be non-increasing");
  }
}

/// Explicit tower; fills dims for bonding checks.
void check_explicit(Checker& c) {
  if (!c.object("", {"name", "description", "levels", "bondings"})) return;
  if (!c.require("/levels")) return;
  const json* levels = c.get("/levels");
  if (!levels->is_array() || levels->empty()) {
    c.error("/levels", "expected a non-empty array of levels");
    return;
  }
  std::vector<int> dims;
  for (std::size_t i = 0; i < levels->size(); ++i) {
    const std::string p = child("/levels", i);
    int dim = -1;
    if (!c.object(p, {"label", "dim", "gram", "matrix"})) {
      dims.push_back(-1);
      continue;
    }
    if (c.get(child(p, "label")) && !c.get(child(p, "label"))->is_string()) c.error(child(p, "label"), "expected a string");
    if (c.require(child(p, "dim")) && c.integer(child(p, "dim"), 1)) dim = c.get(child(p, "dim"))->get<int>();
    int r = 0, k = 0;
    if (c.require(child(p, "matrix")) && c.matrix(child(p, "matrix"), r, k)) {
      if (dim > 0 && (r != dim || k != dim)) {
        c.error(child(p, "matrix"), "matrix is " + std::to_string(r) + "x" + std::to_string(k) + " but dim is " + std::to_string(dim));
      } else {
        check_skew(c, child(p, "matrix"), to_mat(*c.get(child(p, "matrix"))), "levels[" + std::to_string(i) + "].matrix");
      }
    }
    if (c.get(child(p, "gram")) && c.matrix(child(p, "gram"), r, k)) {
      if (dim > 0 && (r != dim || k != dim))
        c.error(child(p, "gram"), "gram is " + std::to_string(r) + "x" + std::to_string(k) + " but dim is " + std::to_string(dim));
      else
        check_gram(c, child(p, "gram"), to_mat(*c.get(child(p, "gram"))));
    }
    dims.push_back(dim);
  }
  const json* bondings = c.get("/bondings");
  const std::size_t expected = levels->size() - 1;
  if (!bondings) {
    if (expected > 0) c.error("/bondings", "missing required key");
    return;
  }
  if (!bondings->is_array() || bondings->size() != expected) {
    c.error("/bondings", "expected an array of " + std::to_string(expected) + " bondings (one per consecutive level pair)");
    return;
  }
  for (std::size_t i = 0; i < bondings->size(); ++i) {
    const std::string p = child("/bondings", i);
    if (!c.object(p, {"matrix"}) || !c.require(child(p, "matrix"))) continue;
    int r = 0, k = 0;
    if (!c.matrix(child(p, "matrix"), r, k)) continue;
    const int lo = dims[i];
    const int hi = dims[i + 1];
    if (lo > 0 && hi > 0 && (r != lo || k != hi))
      c.error(child(p, "matrix"), "bonding for level pair (" + std::to_string(i + 1) + " -> " + std::to_string(i) +
                                      ") must be " + std::to_string(lo) + "x" + std::to_string(hi) + ", got " +
                                      std::to_string(r) + "x" + std::to_string(k));
  }
}

void check_product(Checker& c, const std::string& pp) {
  if (!c.object(pp, {"factors", "count", "l"})) return;
  const bool has_list = c.get(child(pp, "factors")) != nullptr;
  const bool has_count = c.get(child(pp, "count")) != nullptr;
  if (has_list == has_count) {
    c.error(pp, "give exactly one of 'factors' or 'count'");
    return;
  }
  if (has_count) {
    c.integer(child(pp, "count"), 1);
    if (c.get(child(pp, "l"))) c.integer(child(pp, "l"), 1);
    return;
  }
  if (c.get(child(pp, "l"))) c.error(child(pp, "l"), "'l' only applies with 'count'");
  const std::string fp = child(pp, "factors");
  const json* f = c.get(fp);
  if (!f->is_array() || f->empty()) {
    c.error(fp, "expected a non-empty array of factors");
    return;
  }
  for (std::size_t i = 0; i < f->size(); ++i) {
    const std::string p = child(fp, i);
    if (!c.object(p, {"type", "l", "s_eigs", "matrix", "gram"}) || !c.require(child(p, "type"))) continue;
    if (!c.string_in(child(p, "type"), {"darboux", "scaled", "explicit"})) continue;
    const std::string type = c.get(child(p, "type"))->get<std::string>();
    const auto only = [&](const std::vector<std::string>& keys) {
      for (const auto& [k, _] : c.get(p)->items())
        if (k != "type" && std::find(keys.begin(), keys.end(), k) == keys.end())
          c.error(child(p, k), "'" + k + "' does not apply to a " + type + " factor");
    };
    if (type == "darboux") {
      only({"l"});
      if (c.require(child(p, "l"))) c.integer(child(p, "l"), 1);
    } else if (type == "scaled") {
      only({"s_eigs"});
      if (c.require(child(p, "s_eigs"))) check_spectrum(c, child(p, "s_eigs"), false);
    } else {
      only({"matrix", "gram"});
      int r = 0, k = 0;
      if (c.require(child(p, "matrix")) && c.matrix(child(p, "matrix"), r, k)) {
        if (r != k) c.error(child(p, "matrix"), "matrix must be square");
        else check_skew(c, child(p, "matrix"), to_mat(*c.get(child(p, "matrix"))), "factors[" + std::to_string(i) + "].matrix");
      }
      int gr = 0, gk = 0;
      if (c.get(child(p, "gram")) && c.matrix(child(p, "gram"), gr, gk)) {
        if (gr != r || gk != k) c.error(child(p, "gram"), "gram shape does not match the matrix");
        else check_gram(c, child(p, "gram"), to_mat(*c.get(child(p, "gram"))));
      }
    }
  }
}

void check_loop(Checker& c, const std::string& pp) {
  if (!c.object(pp, {"m", "modes", "orders"})) return;
  if (c.require(child(pp, "m"))) c.integer(child(pp, "m"), 1);
  if (c.require(child(pp, "modes"))) c.integer(child(pp, "modes"), 0);
  const std::string op = child(pp, "orders");
  if (!c.require(op)) return;
  const json* o = c.get(op);
  if (!o->is_array() || o->empty()) {
    c.error(op, "expected a non-empty array of Sobolev orders");
    return;
  }
  for (std::size_t i = 0; i < o->size(); ++i) {
    if (!c.integer(child(op, i), 0)) continue;
    if (i > 0 && (*o)[i - 1].is_number_integer() && (*o)[i].get<long>() <= (*o)[i - 1].get<long>())
      c.error(child(op, i), "orders must be increasing");
  }
}

/// Shared by marsden and counterexample: d, a, spectrum choice.
void check_metric_params(Checker& c, const std::string& pp, bool allow_zero_spectrum) {
  int d = -1;
  if (c.require(child(pp, "d")) && c.integer(child(pp, "d"), 1)) d = c.get(child(pp, "d"))->get<int>();
  if (c.get(child(pp, "a")) && c.number_array(child(pp, "a"))) {
    const auto a = to_vec(*c.get(child(pp, "a")));
    if (d > 0 && static_cast<int>(a.size()) != d) c.error(child(pp, "a"), "a must have length d = " + std::to_string(d));
    else if (to_eigen(a).norm() == 0.0) c.error(child(pp, "a"), "a must be non-zero");
  }
  const bool has_s = c.get(child(pp, "s_eigs")) != nullptr;
  const bool has_spec = c.get(child(pp, "spectrum")) != nullptr;
  if (has_s && has_spec) c.error(pp, "give at most one of 's_eigs' or 'spectrum'");
  if (has_s) {
    check_spectrum(c, child(pp, "s_eigs"), allow_zero_spectrum);
    if (d > 0 && c.get(child(pp, "s_eigs"))->is_array() && static_cast<int>(c.get(child(pp, "s_eigs"))->size()) != d)
      c.error(child(pp, "s_eigs"), "s_eigs must have length d = " + std::to_string(d));
  }
  if (has_spec) c.string_in(child(pp, "spectrum"), {"compact", "harmonic"});
  if (c.get(child(pp, "floor"))) {
    if (c.number(child(pp, "floor"), true) && c.get(child(pp, "floor"))->get<double>() > 1.0)
      c.error(child(pp, "floor"), "floor must be <= 1");
  }
  if (c.get(child(pp, "radius"))) c.number(child(pp, "radius"), true);
}

void check_generator(Checker& c) {
  if (!c.object("", {"name", "description", "generator", "params"})) return;
  if (!c.string_in("/generator", {"product", "loop", "counterexample", "marsden", "perturbed-darboux"})) return;
  const std::string g = c.get("/generator")->get<std::string>();
  if (!c.require("/params")) return;
  if (g == "product") {
    check_product(c, "/params");
  } else if (g == "loop") {
    check_loop(c, "/params");
  } else if (g == "counterexample") {
    if (!c.object("/params", {"d", "levels", "a", "s_eigs", "spectrum", "floor", "radius"})) return;
    check_metric_params(c, "/params", false);
    if (c.require("/params/levels")) c.integer("/params/levels", 1);
  } else if (g == "marsden") {
    if (!c.object("/params", {"d", "a", "shift_k", "s_eigs", "spectrum", "floor", "radius"})) return;
    check_metric_params(c, "/params", true);
    if (c.get("/params/shift_k")) c.integer("/params/shift_k", 1);
  } else {
    if (!c.object("/params", {"l", "eps", "seed", "radius"})) return;
    if (c.require("/params/l")) c.integer("/params/l", 1);
    if (c.require("/params/eps")) c.number("/params/eps");
    if (c.get("/params/seed")) c.integer("/params/seed", 0);
    if (c.get("/params/radius")) c.number("/params/radius", true);
  }
}

std::vector<double> spectrum_of(const json& p, int d) {
  if (p.contains("s_eigs")) return to_vec(p["s_eigs"]);
  const std::string kind = p.value("spectrum", "compact");
  if (kind == "harmonic") return harmonic_spectrum(d);
  return compact_spectrum(d, p.value("floor", 1e-9));
}

Vec direction_of(const json& p, int d) {
  if (p.contains("a")) return to_eigen(to_vec(p["a"]));
  return Vec::Unit(d, 0);
}

FormSequence build_explicit(const json& doc) {
  std::vector<ModelSpace> levels;
  std::vector<Mat> forms;
  for (const json& l : doc["levels"]) {
    const int dim = l["dim"].get<int>();
    const std::string label = l.value("label", "");
    levels.push_back(l.contains("gram") ? ModelSpace(to_mat(l["gram"]), label) : ModelSpace(dim, label));
    forms.push_back(to_mat(l["matrix"]));
  }
  std::vector<Mat> bondings;
  if (doc.contains("bondings"))
    for (const json& b : doc["bondings"]) bondings.push_back(to_mat(b["matrix"]));
  std::vector<SkewForm> sf;
  for (std::size_t i = 0; i < levels.size(); ++i) sf.emplace_back(levels[i], forms[i]);
  return FormSequence(Tower(levels, std::move(bondings)), std::move(sf));
}

FormSequence build_product(const json& p) {
  std::vector<SkewForm> factors;
  if (p.contains("count")) {
    factors.assign(p["count"].get<std::size_t>(), darboux_constant_form(p.value("l", 1)));
  } else {
    for (const json& f : p["factors"]) {
      const std::string type = f["type"].get<std::string>();
      if (type == "darboux") {
        factors.push_back(darboux_constant_form(f["l"].get<int>()));
      } else if (type == "scaled") {
        factors.push_back(scaled_darboux_form(to_vec(f["s_eigs"])));
      } else {
        const Mat w = to_mat(f["matrix"]);
        factors.emplace_back(f.contains("gram") ? ModelSpace(to_mat(f["gram"])) : ModelSpace(static_cast<int>(w.rows())), w);
      }
    }
  }
  return make_product_tower(factors);
}

}  // namespace

std::vector<Diagnostic> check_spec(const LocatedJson& src) {
  Checker c(src);
  if (!src.doc().is_object()) {
    c.error("", "spec document must be a JSON object");
  } else if (src.doc().contains("generator")) {
    check_generator(c);
  } else {
    check_explicit(c);
  }
  return c.diagnostics();
}

std::vector<FormField> SpecDocument::level_fields(double constant_radius) const {
  if (counterexample) return counterexample->fields;
  if (field) return {*field};
  std::vector<FormField> out;
  for (const SkewForm& f : sequence->forms())
    out.push_back(FormField::constant(f, Ball{Vec::Zero(f.dim()), constant_radius}));
  return out;
}

SpecDocument load_spec(const std::string& path) {
  const LocatedJson src = LocatedJson::load(path);
  auto diags = check_spec(src);
  if (!diags.empty()) throw InputError(std::move(diags));

  const json& doc = src.doc();
  SpecDocument out;
  out.path = path;
  try {
    if (!doc.contains("generator")) {
      out.kind = SpecKind::Explicit;
      out.sequence = build_explicit(doc);
      return out;
    }
    const std::string g = doc["generator"].get<std::string>();
    const json& p = doc["params"];
    out.params = p;
    if (g == "product") {
      out.kind = SpecKind::Product;
      out.sequence = build_product(p);
    } else if (g == "loop") {
      out.kind = SpecKind::Loop;
      out.sequence = make_loop_tower(p["m"].get<int>(), p["modes"].get<int>(), p["orders"].get<std::vector<int>>());
    } else if (g == "counterexample") {
      out.kind = SpecKind::Counterexample;
      const int d = p["d"].get<int>();
      out.counterexample = make_counterexample_tower(d, p["levels"].get<int>(), direction_of(p, d), spectrum_of(p, d),
                                                     p.value("radius", 2.0));
    } else if (g == "marsden") {
      out.kind = SpecKind::Marsden;
      MarsdenSpec ms;
      ms.d = p["d"].get<int>();
      ms.a = direction_of(p, ms.d);
      ms.shift_k = p.value("shift_k", 1);
      ms.s_eigs = p.contains("s_eigs") || p.contains("spectrum") ? spectrum_of(p, ms.d) : harmonic_spectrum(ms.d);
      out.field = make_marsden_field(ms, p.value("radius", 2.0));
    } else {
      out.kind = SpecKind::PerturbedDarboux;
      out.field = make_perturbed_darboux_field(p["l"].get<int>(), p["eps"].get<double>(), p.value("seed", std::uint64_t{0}),
                                               p.value("radius", 1.0));
    }
  } catch (const wsym::Error& e) {
    throw InputError(src.at("", e.what()));
  }
  return out;
}

}  // namespace wsym::cli
