// Acceptance suite: runs every criterion at its stated tolerance (all exact)
// and prints one pass/fail line per criterion.

#include "folia/camacho_sad.hpp"
#include "folia/ramification.hpp"
#include "folia/report.hpp"

#include <functional>
#include <iostream>
#include <string>
#include <vector>

using namespace folia;

namespace {

FieldPtr base() { return NumberField::gaussian_rationals(); }
BiPoly C(int n) { return BiPoly::constant(base(), Rat(n)); }
BiPoly X() { return BiPoly::var_x(base()); }
BiPoly Y() { return BiPoly::var_y(base()); }

struct Named {
    std::string name;
    OneForm form;
};

std::vector<Named> foliation_corpus() {
    BiPoly prod = (Y() * Y() - X().pow(3)) * (Y() - X());
    return {
        {"saddle", OneForm::make(Y(), X())},
        {"radial", OneForm::make(Y(), -X())},
        {"node2", OneForm::make(C(2) * Y(), -X())},
        {"node3", OneForm::make(C(3) * Y(), -X())},
        {"saddlenode", OneForm::make(-Y(), X() * X())},
        {"cusp23", OneForm::make(C(-3) * X() * X(), C(2) * Y())},
        {"cusp25", OneForm::make(C(-5) * X().pow(4), C(2) * Y())},
        {"prodcurve", OneForm::make(prod.derivative_x(), prod.derivative_y())},
        {"cusp_pert", OneForm::make(C(-3) * X() * X() - Y().pow(3), C(2) * Y())},
        {"dicritical",
         OneForm::make(X() * Y() + Y() * Y(), -(X() * X()) - X() * Y() + Y().pow(3))},
    };
}

struct NamedCurve {
    std::string name;
    BiPoly curve;
};

std::vector<NamedCurve> curve_corpus() {
    return {
        {"cusp23", Y() * Y() - X().pow(3)},
        {"cusp25", Y() * Y() - X().pow(5)},
        {"prod", (Y() * Y() - X().pow(3)) * (Y() - X())},
        {"cusp32", Y().pow(3) - X() * X()},
        {"smooth", Y() - X()},
    };
}

int failures = 0;

void criterion(const std::string& id, const std::string& what,
               const std::function<bool(std::string&)>& run) {
    std::string detail;
    bool ok = false;
    try {
        ok = run(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::cout << id << " " << (ok ? "PASS" : "FAIL") << " - " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++failures;
}

} // namespace

int main() {
    auto corpus = foliation_corpus();

    criterion("A1", "reduction terminates with only simple/regular/saddle-node "
                    "classifications within depth 50",
              [&](std::string& detail) {
                  int count = 0;
                  for (const auto& item : corpus) {
                      ResolutionTree tree = reduce_singularities(item.form, 50);
                      if (!fully_reduced(tree)) {
                          detail = item.name + " not reduced";
                          return false;
                      }
                      for (const auto& rec : tree.final_records)
                          if (rec.cls != SingClass::Regular &&
                              rec.cls != SingClass::Simple &&
                              rec.cls != SingClass::SaddleNode) {
                              detail = item.name + " has a non-terminal record";
                              return false;
                          }
                      ++count;
                  }
                  detail = std::to_string(count) + " foliations reduced";
                  return count >= 10;
              });

    criterion("A2", "Camacho-Sad index theorem holds exactly on every invariant "
                    "component of every corpus tree",
              [&](std::string& detail) {
                  int comps = 0;
                  for (const auto& item : corpus) {
                      ResolutionTree tree = reduce_singularities(item.form, 50);
                      auto reports = index_theorem_check(tree);
                      for (const auto& r : reports) {
                          if (r.skipped) continue;
                          if (r.unsupported || !r.equal) {
                              detail = item.name + " E" + std::to_string(r.component);
                              return false;
                          }
                          ++comps;
                      }
                  }
                  // Hand-checked anchor: one blow-up of the saddle sums
                  // -1/2 + -1/2 = -1.
                  OneForm saddle = OneForm::make(Y(), X());
                  ResolutionTree t = make_tree(Payload(saddle));
                  t = blow_up_at(t, 0, ChartDir::X,
                                 {FieldElement::zero(base()), FieldElement::zero(base())});
                  for (auto& rec : singular_locus_on_divisor(t, 1))
                      t.final_records.push_back(rec);
                  auto rep = index_theorem_check(t);
                  if (rep.size() != 1 || rep[0].indices.size() != 2 ||
                      !(rep[0].sum == FieldElement::from_rat(base(), Rat(-1))) ||
                      !rep[0].equal)
                      return false;
                  detail = std::to_string(comps) + " invariant components, all exact";
                  return true;
              });

    criterion("A3", "main theorem, foliation form: some d <= 12 gives 100% free "
                    "centers and 100% simple final singularities",
              [&](std::string& detail) {
                  for (const auto& item : corpus) {
                      RamificationSearchResult r = find_regular_ramification(item.form, 12, 50);
                      if (!free_centers_only(r.tree) || !fully_reduced(r.tree)) {
                          detail = item.name;
                          return false;
                      }
                      auto idx = index_theorem_check(r.tree);
                      if (!index_theorem_holds(idx)) {
                          detail = item.name + " ramified tree fails the index theorem";
                          return false;
                      }
                      if (item.name == "cusp23" && r.d != 2) {
                          detail = "cusp23 expected d=2, got " + std::to_string(r.d);
                          return false;
                      }
                      if (item.name == "saddle" && r.d != 1) {
                          detail = "saddle expected d=1";
                          return false;
                      }
                  }
                  return true;
              });

    criterion("A4", "main theorem, curve form: the Puiseux lcm smooths every branch "
                    "and the embedded resolution is free-only; unramified cusp is the "
                    "negative control",
              [&](std::string& detail) {
                  for (const auto& item : curve_corpus()) {
                      CurveTheoremResult r = curve_theorem_check(item.curve, 16, 50);
                      for (const auto& j : r.ramified_jets)
                          if (j.ram != 1) {
                              detail = item.name + " has a ramified branch left";
                              return false;
                          }
                      if (!r.free_only) {
                          detail = item.name + " used a satellite center";
                          return false;
                      }
                  }
                  CurveResolution control = embedded_resolution(Y() * Y() - X().pow(3), 50);
                  if (control.free_only) {
                      detail = "negative control: unramified cusp came out free-only";
                      return false;
                  }
                  bool sat = false;
                  for (const auto& n : control.tree.nodes)
                      if (n.kind == CenterKind::Satellite) sat = true;
                  if (!sat) {
                      detail = "negative control lost its satellite center";
                      return false;
                  }
                  return true;
              });

    criterion("A5", "constructive Camacho-Sad: separatrix jets with residual == 0 "
                    "mod x^16; the cusp jet is exactly y = x^(3/2)",
              [&](std::string& detail) {
                  for (const auto& item : corpus) {
                      ResolutionTree tree = reduce_singularities(item.form, 50);
                      SeparatrixJet s = extract_separatrix(tree, 16);
                      if (s.residual_checked_order < 16 * s.jet.ram) {
                          detail = item.name + " residual too short";
                          return false;
                      }
                      if (item.name == "cusp23") {
                          if (s.jet.ram != 2) {
                              detail = "cusp jet denominator wrong";
                              return false;
                          }
                          for (int k = 0; k < s.jet.series.truncation(); ++k) {
                              FieldElement expect =
                                  k == 3 ? FieldElement::one(s.jet.series.field())
                                         : FieldElement::zero(s.jet.series.field());
                              if (!(s.jet.series.at(k) == expect)) {
                                  detail = "cusp jet is not exactly t^3";
                                  return false;
                              }
                          }
                      }
                  }
                  return true;
              });

    criterion("A6", "Hamiltonian oracle: separatrix jets match Newton-Puiseux "
                    "branches of the primitive to order 16",
              [&](std::string& detail) {
                  struct Ham {
                      std::string name;
                      OneForm w;
                      BiPoly f;
                  };
                  BiPoly prod = (Y() * Y() - X().pow(3)) * (Y() - X());
                  std::vector<Ham> hams = {
                      {"saddle", OneForm::make(Y(), X()), X() * Y()},
                      {"cusp23", OneForm::make(C(-3) * X() * X(), C(2) * Y()),
                       Y() * Y() - X().pow(3)},
                      {"cusp25", OneForm::make(C(-5) * X().pow(4), C(2) * Y()),
                       Y() * Y() - X().pow(5)},
                      {"prodcurve", OneForm::make(prod.derivative_x(), prod.derivative_y()),
                       prod},
                  };
                  for (const auto& h : hams) {
                      SeparatrixJet s =
                          extract_separatrix(reduce_singularities(h.w, 50), 16);
                      FieldPtr f = s.jet.series.field();
                      int window = s.jet.series.truncation();
                      PowerSeries xt =
                          PowerSeries::identity(f, window).pow_series((unsigned)s.jet.ram);
                      PowerSeries r = bipoly_eval_series(h.f, xt, s.jet.series);
                      auto o = r.ord();
                      if (o && *o < 16 * s.jet.ram) {
                          detail = h.name + ": primitive does not vanish on the jet";
                          return false;
                      }
                      auto exp = newton_puiseux_expand(h.f, 16);
                      bool seen = false;
                      for (const auto& j : exp.jets)
                          if (j.ram == s.jet.ram) seen = true;
                      if (!seen) {
                          detail = h.name + ": no branch with matching denominator";
                          return false;
                      }
                  }
                  return true;
              });

    criterion("A7", "structural invariants: chart gluing, unimodular intersection "
                    "matrices, saturation everywhere, byte-identical JSON",
              [&](std::string& detail) {
                  for (const auto& item : corpus) {
                      ResolutionTree tree = reduce_singularities(item.form, 50);
                      for (const auto& n : tree.nodes) {
                          if (!verify_gluing(tree, n.id)) {
                              detail = item.name + " gluing failed at node " +
                                       std::to_string(n.id);
                              return false;
                          }
                          if (!verify_chart_composition(n.x_chart.chart) ||
                              !verify_chart_composition(n.y_chart.chart)) {
                              detail = item.name + " chart recomposition failed";
                              return false;
                          }
                          if (!std::get<OneForm>(n.x_chart.payload).is_saturated() ||
                              !std::get<OneForm>(n.y_chart.payload).is_saturated()) {
                              detail = item.name + " lost saturation";
                              return false;
                          }
                      }
                      if (!tree.components.empty()) {
                          DualGraph g = dual_graph(tree);
                          if (!(g.det == 1 || g.det == -1)) {
                              detail = item.name + " intersection determinant " +
                                       g.det.str();
                              return false;
                          }
                      }
                  }
                  // Determinism: byte-identical JSON for repeated runs.
                  for (const char* text :
                       {"omega = -3*x^2 dx + 2*y dy", "omega = 2*y dx - x dy"}) {
                      for (const char* cmd : {"resolve", "indices", "separatrix", "ramify"}) {
                          InputDocument doc = parse_input(text, "det");
                          Report a = run_command(doc, cmd);
                          Report b = run_command(doc, cmd);
                          if (a.json.dump(2) != b.json.dump(2)) {
                              detail = std::string(cmd) + " JSON not reproducible";
                              return false;
                          }
                      }
                  }
                  return true;
              });

    if (failures == 0)
        std::cout << "all acceptance criteria passed" << std::endl;
    else
        std::cout << failures << " acceptance criterion(s) FAILED" << std::endl;
    return failures == 0 ? 0 : 1;
}
