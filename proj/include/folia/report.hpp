#pragma once

#include "folia/camacho_sad.hpp"
#include "folia/foliation.hpp"
#include "folia/parse.hpp"
#include "folia/ramification.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

namespace folia {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Number formatting: exact strings for rationals and Gaussian rationals, a
// (minimal polynomial, 6-place decimal) pair for proper algebraic numbers.
// The decimal is presentation only.

inline std::string minpoly_to_string(const std::vector<Rat>& mp) {
    std::string s;
    for (std::size_t k = mp.size(); k-- > 0;) {
        const Rat& c = mp[k];
        if (c == 0) continue;
        std::string term;
        Rat a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        std::string cs = rat_to_string(a);
        if (k == 0) {
            term = cs;
        } else {
            term = (cs == "1" ? "" : cs + "*");
            term += "t";
            if (k > 1) term += "^" + std::to_string(k);
        }
        if (s.empty())
            s += (neg ? "-" : "") + term;
        else
            s += (neg ? " - " : " + ") + term;
    }
    if (s.empty()) s = "0";
    return s;
}

inline std::string approx_to_string(const std::complex<double>& z) {
    char buf[64];
    if (std::abs(z.imag()) < 1e-12) {
        std::snprintf(buf, sizeof buf, "%.6f", z.real());
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.6f%+.6fi", z.real(), z.imag());
    return buf;
}

inline Json field_element_json(const FieldElement& v) {
    if (v.is_gaussian()) return Json(v.as_gaussian()->to_string());
    Json j;
    j["minpoly"] = minpoly_to_string(v.minpoly_over_q());
    j["approx"] = approx_to_string(v.approx());
    return j;
}

inline std::string field_element_text(const FieldElement& v) {
    if (v.is_gaussian()) return v.as_gaussian()->to_string();
    return "alg(" + minpoly_to_string(v.minpoly_over_q()) + " ~ " +
           approx_to_string(v.approx()) + ")";
}

inline std::string point_text(const std::pair<FieldElement, FieldElement>& pt) {
    return "(" + field_element_text(pt.first) + ", " + field_element_text(pt.second) + ")";
}

// ---------------------------------------------------------------------------
// DOT emitters

inline std::string emit_dot_dual(const ResolutionTree& tree) {
    const DualGraph g = dual_graph(tree);
    std::ostringstream os;
    os << "digraph dual {\n";
    for (const auto& [id, self] : g.vertices)
        os << "  E" << id << " [label=\"E" << id << " (" << self << ")\"];\n";
    for (const auto& [i, j] : g.edges) os << "  E" << i << " -> E" << j << " [dir=none];\n";
    os << "}\n";
    return os.str();
}

inline std::string emit_dot_centers(const ResolutionTree& tree) {
    std::ostringstream os;
    os << "digraph centers {\n";
    for (const auto& n : tree.nodes)
        os << "  C" << n.id << " [label=\"center " << n.id << " (" << to_string(n.kind)
           << ")\"];\n";
    for (const auto& n : tree.nodes)
        if (n.parent != 0) os << "  C" << n.parent << " -> C" << n.id << ";\n";
    os << "}\n";
    return os.str();
}

inline std::string emit_dot(const ResolutionTree& tree, const std::string& which = "dual") {
    return which == "centers" ? emit_dot_centers(tree) : emit_dot_dual(tree);
}

// ---------------------------------------------------------------------------
// Tree summaries shared by several commands

inline Json tree_summary_json(const ResolutionTree& tree) {
    Json j;
    int depth = 0;
    for (const auto& n : tree.nodes) depth = std::max(depth, n.depth);
    j["blowups"] = tree.nodes.size();
    j["depth"] = depth;
    if (tree.ram_exponent != 1) j["ramification"] = tree.ram_exponent;
    Json centers = Json::array();
    for (const auto& n : tree.nodes) {
        Json c;
        c["id"] = n.id;
        c["parent"] = n.parent;
        c["chart"] = to_string(n.parent_dir);
        c["kind"] = to_string(n.kind);
        c["point"] = Json::array({field_element_json(n.center.first),
                                  field_element_json(n.center.second)});
        c["multiplicity"] = n.multiplicity;
        if (std::holds_alternative<OneForm>(tree.root.payload))
            c["dicritical"] = n.dicritical;
        centers.push_back(c);
    }
    j["centers"] = centers;
    Json comps = Json::array();
    for (const auto& comp : tree.components) {
        Json c;
        c["id"] = comp.id;
        c["self_intersection"] = comp.self_intersection;
        if (std::holds_alternative<OneForm>(tree.root.payload))
            c["dicritical"] = comp.dicritical;
        comps.push_back(c);
    }
    j["components"] = comps;
    if (!tree.components.empty()) {
        DualGraph g = dual_graph(tree);
        Json edges = Json::array();
        for (const auto& [a, b] : g.edges) edges.push_back(Json::array({a, b}));
        j["dual_edges"] = edges;
        j["intersection_determinant"] = g.det.str();
    }
    return j;
}

inline Json final_records_json(const ResolutionTree& tree) {
    Json arr = Json::array();
    for (const auto& rec : tree.final_records) {
        Json r;
        r["node"] = rec.node;
        r["chart"] = to_string(rec.dir);
        r["point"] = Json::array(
            {field_element_json(rec.point.first), field_element_json(rec.point.second)});
        r["class"] = to_string(rec.cls);
        r["trace"] = field_element_json(rec.trace);
        r["det"] = field_element_json(rec.det);
        Json comps = Json::array();
        for (const auto& rc : rec.components) comps.push_back(rc.id);
        r["on_components"] = comps;
        if (auto eig = eigenvalues_in_tower(rec.trace, rec.det)) {
            r["eigenvalues"] = Json::array(
                {field_element_json(eig->first), field_element_json(eig->second)});
        }
        arr.push_back(r);
    }
    return arr;
}

inline std::string tree_summary_text(const ResolutionTree& tree) {
    std::ostringstream os;
    int depth = 0;
    for (const auto& n : tree.nodes) depth = std::max(depth, n.depth);
    os << "blow-ups: " << tree.nodes.size() << ", depth: " << depth << "\n";
    for (const auto& n : tree.nodes) {
        os << "  center " << n.id << " [" << to_string(n.kind) << "] on node " << n.parent
           << "/" << to_string(n.parent_dir) << " at " << point_text(n.center);
        if (std::holds_alternative<OneForm>(tree.root.payload) && n.dicritical)
            os << " (dicritical)";
        os << "\n";
    }
    for (const auto& comp : tree.components) {
        os << "  E" << comp.id << "^2 = " << comp.self_intersection;
        if (comp.dicritical) os << " (dicritical, non-invariant)";
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Commands

struct Report {
    std::string text;
    Json json;
    std::string dot;
    int exit_code = 0;
};

inline Json input_json(const InputDocument& doc) {
    Json j;
    j["name"] = doc.name;
    j["kind"] = doc.kind == InputDocument::Kind::Foliation ? "foliation" : "curve";
    j["payload"] = serialize_payload(doc);
    if (doc.saturation_warning) j["saturation_warning"] = true;
    return j;
}

inline Json options_json(const Options& o) {
    Json j;
    j["order"] = o.order;
    j["dmax"] = o.dmax;
    j["max_depth"] = o.max_depth;
    return j;
}

inline const OneForm& require_form(const InputDocument& doc, const std::string& cmd) {
    if (!doc.form)
        throw domain_error("command '" + cmd + "' requires a foliation input");
    return *doc.form;
}

inline Report run_resolve(const InputDocument& doc) {
    const OneForm& w = require_form(doc, "resolve");
    ResolutionTree tree = reduce_singularities(w, doc.options.max_depth);
    Report rep;
    Json j;
    j["command"] = "resolve";
    j["input"] = input_json(doc);
    j["options"] = options_json(doc.options);
    Json result = tree_summary_json(tree);
    result["already_reduced"] = tree.nodes.empty();
    result["final_singularities"] = final_records_json(tree);
    j["result"] = result;
    rep.json = j;
    std::ostringstream os;
    os << "resolve: " << doc.name << "\n";
    if (doc.saturation_warning) os << "warning: input form was saturated\n";
    if (tree.nodes.empty()) os << "already reduced (no blow-ups needed)\n";
    os << tree_summary_text(tree);
    for (const auto& rec : tree.final_records) {
        os << "  singularity at node " << rec.node << "/" << to_string(rec.dir) << " "
           << point_text(rec.point) << ": " << to_string(rec.cls)
           << " (T=" << field_element_text(rec.trace) << ", D=" << field_element_text(rec.det)
           << ")";
        if (rec.is_corner()) os << " [corner]";
        os << "\n";
    }
    rep.text = os.str();
    rep.dot = emit_dot(tree, doc.options.dot_graph);
    return rep;
}

inline Report run_indices(const InputDocument& doc) {
    const OneForm& w = require_form(doc, "indices");
    ResolutionTree tree = reduce_singularities(w, doc.options.max_depth);
    bool scratch_blowup = false;
    if (tree.nodes.empty() && w.singular_at_origin()) {
        // Already reduced: show the table for one blow-up so the origin's
        // indices are visible.
        FieldPtr f = w.field();
        FieldElement zero = FieldElement::zero(f);
        tree.final_records.clear();
        tree = blow_up_at(tree, 0, ChartDir::X, {zero, zero});
        for (auto& rec : singular_locus_on_divisor(tree, 1))
            tree.final_records.push_back(rec);
        scratch_blowup = true;
    }
    auto reports = index_theorem_check(tree);
    Report rep;
    Json j;
    j["command"] = "indices";
    j["input"] = input_json(doc);
    j["options"] = options_json(doc.options);
    if (scratch_blowup)
        j["note"] = "input already reduced; table shown for one blow-up";
    Json rows = Json::array();
    bool all = true;
    for (const auto& r : reports) {
        Json row;
        row["component"] = r.component;
        row["self_intersection"] = r.self_intersection;
        if (r.skipped) {
            row["skipped"] = r.skip_reason;
        } else if (r.unsupported) {
            row["unsupported"] = r.error;
            all = false;
        } else {
            Json idx = Json::array();
            for (const auto& [label, v] : r.indices) {
                Json e;
                e["point"] = label;
                e["index"] = field_element_json(v);
                idx.push_back(e);
            }
            row["indices"] = idx;
            row["sum"] = field_element_json(r.sum);
            row["equal"] = r.equal;
            if (!r.equal) all = false;
        }
        rows.push_back(row);
    }
    j["result"]["components"] = rows;
    j["result"]["theorem_holds"] = all;
    rep.json = j;
    std::ostringstream os;
    os << "indices: " << doc.name << "\n";
    for (const auto& r : reports) {
        os << "  E" << r.component << " (E^2 = " << r.self_intersection << "): ";
        if (r.skipped) {
            os << "skipped: " << r.skip_reason << "\n";
            continue;
        }
        if (r.unsupported) {
            os << "unsupported: " << r.error << "\n";
            continue;
        }
        os << "sum = " << field_element_text(r.sum) << ", equal = "
           << (r.equal ? "true" : "false") << "  [";
        bool first = true;
        for (const auto& [label, v] : r.indices) {
            if (!first) os << ", ";
            os << field_element_text(v);
            first = false;
        }
        os << "]\n";
    }
    os << (all ? "index theorem verified on every invariant component\n"
               : "INDEX THEOREM FAILED\n");
    rep.text = os.str();
    rep.dot = emit_dot(tree, doc.options.dot_graph);
    if (!all) rep.exit_code = 2;
    return rep;
}

inline Json jet_json(const PuiseuxJet& jet) {
    Json j;
    j["ramification"] = jet.ram;
    j["x"] = "t^" + std::to_string(jet.ram);
    Json terms = Json::array();
    for (int k = 0; k < jet.series.truncation(); ++k) {
        if (jet.series.at(k).is_zero()) continue;
        Json t;
        t["exp"] = k;
        t["coeff"] = field_element_json(jet.series.at(k));
        terms.push_back(t);
    }
    j["terms"] = terms;
    j["exact"] = jet.exact;
    j["guaranteed_order"] = jet.guaranteed_t_order;
    return j;
}

inline std::string jet_text(const PuiseuxJet& jet) {
    std::ostringstream os;
    std::string body;
    bool first = true;
    for (int k = 0; k < jet.series.truncation(); ++k) {
        if (jet.series.at(k).is_zero()) continue;
        std::string coeff = field_element_text(jet.series.at(k));
        std::string term;
        if (coeff == "1" && k > 0)
            term = "";
        else if (coeff == "-1" && k > 0)
            term = "-";
        else
            term = coeff + (k > 0 ? "*" : "");
        if (k > 0) {
            term += "t";
            if (k > 1) term += "^" + std::to_string(k);
        }
        if (!first && term.rfind('-', 0) != 0) body += " + ";
        else if (!first) body += " ";
        body += term;
        first = false;
    }
    if (first) body = "0";
    os << "y = " << body << ", x = t^" << jet.ram;
    if (!jet.exact) os << "  (truncated at t^" << jet.series.truncation() << ")";
    return os.str();
}

inline Report run_separatrix(const InputDocument& doc) {
    const OneForm& w = require_form(doc, "separatrix");
    ResolutionTree tree = reduce_singularities(w, doc.options.max_depth);
    SeparatrixJet sep = extract_separatrix(tree, doc.options.order);
    Report rep;
    Json j;
    j["command"] = "separatrix";
    j["input"] = input_json(doc);
    j["options"] = options_json(doc.options);
    Json r;
    r["jet"] = jet_json(sep.jet);
    r["provenance"]["origin"] = sep.origin;
    r["provenance"]["node"] = sep.node;
    r["provenance"]["chart"] = to_string(sep.dir);
    r["provenance"]["point"] = sep.point_label;
    r["provenance"]["unramification"] = sep.unramification;
    r["residual_order"] = sep.residual_checked_order;
    r["residual_exact"] = sep.residual_exact;
    j["result"] = r;
    rep.json = j;
    std::ostringstream os;
    os << "separatrix: " << doc.name << "\n  " << jet_text(sep.jet) << "\n";
    os << "  from " << sep.origin << " at " << sep.point_label << "\n";
    os << "  invariance residual "
       << (sep.residual_exact ? std::string("identically zero (to the computed window)")
                              : "vanishes to order t^" +
                                    std::to_string(sep.residual_checked_order))
       << "\n";
    rep.text = os.str();
    rep.dot = emit_dot(tree, doc.options.dot_graph);
    return rep;
}

inline Report run_ramify(const InputDocument& doc) {
    const OneForm& w = require_form(doc, "ramify");
    RamificationSearchResult res =
        find_regular_ramification(w, doc.options.dmax, doc.options.max_depth);
    Report rep;
    Json j;
    j["command"] = "ramify";
    j["input"] = input_json(doc);
    j["options"] = options_json(doc.options);
    Json r;
    r["d"] = res.d;
    r["hint"] = res.hint;
    r["free_only"] = true;
    r["simple_only"] = true;
    Json attempts = Json::array();
    for (const auto& att : res.attempts) {
        Json a;
        a["d"] = att.d;
        a["free_only"] = att.free_only;
        a["simple_only"] = att.simple_only;
        a["satellites"] = att.satellites;
        attempts.push_back(a);
    }
    r["attempts"] = attempts;
    r["tree"] = tree_summary_json(res.tree);
    r["final_singularities"] = final_records_json(res.tree);
    j["result"] = r;
    rep.json = j;
    std::ostringstream os;
    os << "ramify: " << doc.name << "\n";
    os << "  d = " << res.d << ", free-only = true, simple-only = true\n";
    os << tree_summary_text(res.tree);
    rep.text = os.str();
    rep.dot = emit_dot(res.tree, doc.options.dot_graph);
    return rep;
}

inline Report run_curve_check(const InputDocument& doc) {
    if (!doc.curve) throw domain_error("command 'curve-check' requires a curve input");
    BiPoly f = *doc.curve;
    bool squarefree_warning = false;
    if (!is_squarefree(f)) {
        f = squarefree_part(f);
        squarefree_warning = true;
    }
    CurveTheoremResult res =
        curve_theorem_check(f, doc.options.order, doc.options.max_depth);
    Report rep;
    Json j;
    j["command"] = "curve-check";
    j["input"] = input_json(doc);
    if (squarefree_warning) j["input"]["squarefree_warning"] = true;
    j["options"] = options_json(doc.options);
    Json r;
    r["d"] = res.d;
    r["free_only"] = res.free_only;
    Json jb = Json::array();
    for (const auto& jet : res.original_jets) jb.push_back(jet_json(jet));
    r["branches"] = jb;
    Json jr = Json::array();
    bool all_smooth = true;
    for (const auto& jet : res.ramified_jets) {
        jr.push_back(jet_json(jet));
        if (jet.ram != 1) all_smooth = false;
    }
    r["ramified_branches"] = jr;
    r["ramified_all_smooth"] = all_smooth;
    r["tree"] = tree_summary_json(res.tree);
    j["result"] = r;
    rep.json = j;
    std::ostringstream os;
    os << "curve-check: " << doc.name << "\n";
    if (squarefree_warning) os << "warning: repeated factors removed\n";
    os << "  d = " << res.d << ", free-only = " << (res.free_only ? "true" : "false")
       << ", ramified branches all smooth = " << (all_smooth ? "true" : "false") << "\n";
    os << "  branches:\n";
    for (const auto& jet : res.original_jets) os << "    " << jet_text(jet) << "\n";
    os << tree_summary_text(res.tree);
    rep.text = os.str();
    rep.dot = emit_dot(res.tree, doc.options.dot_graph);
    return rep;
}

inline Report run_command(const InputDocument& doc, const std::string& command) {
    if (command == "resolve") return run_resolve(doc);
    if (command == "indices") return run_indices(doc);
    if (command == "separatrix") return run_separatrix(doc);
    if (command == "ramify") return run_ramify(doc);
    if (command == "curve-check") return run_curve_check(doc);
    throw domain_error("unknown command '" + command + "'");
}

inline std::string render_report(const Report& rep, const Options& opts) {
    if (opts.emit == "json") return rep.json.dump(2) + "\n";
    if (opts.emit == "dot") return rep.dot;
    return rep.text;
}

} // namespace folia
