#include "eerg/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace eerg {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string signed_order(GranularityOrder o) {
    int v = order_value(o);
    return v > 0 ? "+" + std::to_string(v) : std::to_string(v);
}

std::string join_labels(const std::vector<std::string>& labels) {
    std::string out;
    for (const std::string& l : labels) {
        if (!out.empty()) out.push_back(kChainSeparator);
        out += l;
    }
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string entity_node_id(const EnvironmentalEntity& e) {
    return signed_order(e.order) + ":" + e.label;
}

ordered_json provenance_json(const std::vector<ProvenanceEntry>& provenance) {
    ordered_json out = ordered_json::array();
    for (const ProvenanceEntry& p : provenance) {
        out.push_back(ordered_json{{"run", p.run_id},
                                   {"frame", p.frame_id},
                                   {"result", result_class_name(p.result)}});
    }
    return out;
}

ordered_json counts_json(const ClassCounts& counts) {
    ordered_json out;
    for (ResultClass r : kAllResultClasses) {
        out[result_class_name(r)] = counts[r];
    }
    return out;
}

}  // namespace

OutputFormat output_format_from_name(std::string_view name) {
    if (name == "text") return OutputFormat::Text;
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "dot") return OutputFormat::Dot;
    throw Error(ErrorCode::ParseError,
                "unknown output format '" + std::string(name) + "'");
}

EvaluationReport evaluate(const std::string& campaign_id,
                          const CampaignClassification& classification) {
    EvaluationReport report;
    report.campaign_id = campaign_id;
    report.total.run_id = "total";
    for (const RunClassification& run : classification.runs) {
        EvaluationRow row;
        row.run_id = run.run_id;
        for (const FrameClassification& frame : run.frames) {
            for (const Outcome& o : frame.outcomes) {
                row.counts[static_cast<std::size_t>(o.result)] += 1;
                if (o.subject_is_prediction) {
                    row.predictions += 1;
                } else {
                    row.ground_truth += 1;
                    if (o.matched_counterpart) row.predictions += 1;
                }
            }
        }
        for (std::size_t i = 0; i < 4; ++i) {
            report.total.counts[i] += row.counts[i];
        }
        report.total.ground_truth += row.ground_truth;
        report.total.predictions += row.predictions;
        report.runs.push_back(std::move(row));
    }
    std::sort(report.runs.begin(), report.runs.end(),
              [](const EvaluationRow& a, const EvaluationRow& b) {
                  return a.run_id < b.run_id;
              });
    return report;
}

namespace {

std::string evaluation_text(const EvaluationReport& report) {
    std::ostringstream out;
    out << "campaign " << report.campaign_id << "\n";
    auto line = [&](const EvaluationRow& row) {
        out << (row.run_id == "total" ? "total" : "run " + row.run_id);
        for (ResultClass r : kAllResultClasses) {
            out << " " << result_class_name(r) << "="
                << row.counts[static_cast<std::size_t>(r)];
        }
        out << " gt=" << row.ground_truth
            << " predictions=" << row.predictions
            << " conservation=" << (row.conserved() ? "ok" : "VIOLATED")
            << "\n";
    };
    for (const EvaluationRow& row : report.runs) line(row);
    line(report.total);
    return out.str();
}

ordered_json evaluation_row_json(const EvaluationRow& row) {
    ordered_json j;
    j["run"] = row.run_id;
    for (ResultClass r : kAllResultClasses) {
        j[result_class_name(r)] = row.counts[static_cast<std::size_t>(r)];
    }
    j["ground_truth"] = row.ground_truth;
    j["predictions"] = row.predictions;
    j["conserved"] = row.conserved();
    return j;
}

std::string evaluation_csv(const EvaluationReport& report) {
    std::ostringstream out;
    out << "run,R0,R1,R2,R3,ground_truth,predictions,conserved\n";
    auto line = [&](const EvaluationRow& row) {
        out << row.run_id;
        for (ResultClass r : kAllResultClasses) {
            out << ',' << row.counts[static_cast<std::size_t>(r)];
        }
        out << ',' << row.ground_truth << ',' << row.predictions << ','
            << (row.conserved() ? "true" : "false") << "\n";
    };
    for (const EvaluationRow& row : report.runs) line(row);
    line(report.total);
    return out.str();
}

}  // namespace

std::string render_evaluation(const EvaluationReport& report,
                              OutputFormat format) {
    switch (format) {
        case OutputFormat::Text:
            return evaluation_text(report);
        case OutputFormat::Json: {
            ordered_json j;
            j["campaign"] = report.campaign_id;
            ordered_json runs = ordered_json::array();
            for (const EvaluationRow& row : report.runs) {
                runs.push_back(evaluation_row_json(row));
            }
            j["runs"] = std::move(runs);
            j["total"] = evaluation_row_json(report.total);
            return j.dump(2) + "\n";
        }
        case OutputFormat::Csv:
            return evaluation_csv(report);
        case OutputFormat::Dot:
            throw Error(ErrorCode::ValidationError,
                        "dot output applies to the graph subcommand only");
    }
    return {};
}

namespace {

std::string graph_text(const RelationGraph& graph) {
    std::ostringstream out;
    const EntityRegistry& reg = graph.registry();
    out << "eerg-graph format=1\n";
    out << "entities=" << reg.size() << " edges=" << reg.edges().size()
        << " chains=" << graph.entries().size()
        << " relations=" << graph.total_relations() << "\n";
    for (const RelationEntry& entry : graph.entries()) {
        out << "chain " << join_labels(entry.labels);
        for (ResultClass r : kAllResultClasses) {
            out << " " << result_class_name(r) << "=" << entry.counts[r];
        }
        out << "\n";
    }
    return out.str();
}

std::string graph_json(const RelationGraph& graph) {
    const EntityRegistry& reg = graph.registry();
    ordered_json j;
    j["total_relations"] = graph.total_relations();

    ordered_json entities = ordered_json::array();
    std::vector<EntityId> sorted;
    for (GranularityOrder o : kAllOrders) {
        for (EntityId id : reg.at_order(o)) sorted.push_back(id);
    }
    for (EntityId id : sorted) {
        const auto& e = reg.entity(id);
        entities.push_back(ordered_json{{"label", e.label},
                                        {"order", order_value(e.order)},
                                        {"synthetic", e.synthetic}});
    }
    j["entities"] = std::move(entities);

    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [p, c] : reg.edges()) {
        edges.emplace_back(entity_node_id(reg.entity(p)),
                           entity_node_id(reg.entity(c)));
    }
    std::sort(edges.begin(), edges.end());
    ordered_json edges_json = ordered_json::array();
    for (const auto& [p, c] : edges) {
        edges_json.push_back(ordered_json{{"parent", p}, {"child", c}});
    }
    j["edges"] = std::move(edges_json);

    ordered_json chains = ordered_json::array();
    for (const RelationEntry& entry : graph.entries()) {
        ordered_json labels = ordered_json::array();
        for (const std::string& l : entry.labels) labels.push_back(l);
        chains.push_back(ordered_json{{"chain", labels},
                                      {"counts", counts_json(entry.counts)},
                                      {"provenance",
                                       provenance_json(entry.provenance)}});
    }
    j["chains"] = std::move(chains);
    return j.dump(2) + "\n";
}

std::string graph_csv(const RelationGraph& graph) {
    std::ostringstream out;
    out << "chain,R0,R1,R2,R3,total\n";
    for (const RelationEntry& entry : graph.entries()) {
        out << join_labels(entry.labels);
        for (ResultClass r : kAllResultClasses) {
            out << ',' << entry.counts[r];
        }
        out << ',' << entry.counts.total() << "\n";
    }
    return out.str();
}

std::string graph_dot(const RelationGraph& graph) {
    const EntityRegistry& reg = graph.registry();
    std::ostringstream out;
    out << "digraph eerg {\n";
    out << "  rankdir=TB;\n";
    out << "  node [shape=ellipse];\n";

    std::vector<EntityId> sorted;
    for (GranularityOrder o : kAllOrders) {
        for (EntityId id : reg.at_order(o)) sorted.push_back(id);
    }
    for (EntityId id : sorted) {
        const auto& e = reg.entity(id);
        out << "  \"" << dot_escape(entity_node_id(e)) << "\" [label=\""
            << dot_escape(e.label) << "\"";
        if (e.synthetic) out << ", style=dashed";
        out << "];\n";
    }

    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [p, c] : reg.edges()) {
        edges.emplace_back(entity_node_id(reg.entity(p)),
                           entity_node_id(reg.entity(c)));
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& [p, c] : edges) {
        out << "  \"" << dot_escape(p) << "\" -> \"" << dot_escape(c)
            << "\";\n";
    }

    std::size_t rel_index = 0;
    for (const RelationEntry& entry : graph.entries()) {
        std::string counts;
        for (ResultClass r : kAllResultClasses) {
            if (!counts.empty()) counts += ' ';
            counts += result_class_name(r);
            counts += '=';
            counts += std::to_string(entry.counts[r]);
        }
        std::string rel_id = "rel" + std::to_string(rel_index++);
        out << "  \"" << rel_id << "\" [shape=note, label=\""
            << dot_escape(join_labels(entry.labels)) << "\\n"
            << counts << "\"];\n";
        out << "  \"" << rel_id << "\" -> \""
            << dot_escape(entity_node_id(reg.entity(entry.chain.terminal())))
            << "\" [style=dashed];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace

std::string render_graph(const RelationGraph& graph, OutputFormat format) {
    switch (format) {
        case OutputFormat::Text: return graph_text(graph);
        case OutputFormat::Json: return graph_json(graph);
        case OutputFormat::Csv: return graph_csv(graph);
        case OutputFormat::Dot: return graph_dot(graph);
    }
    return {};
}

namespace {

std::string candidates_joined(const DeficitFinding& f, char sep) {
    std::string out;
    for (DeficitType t : f.candidates) {
        if (!out.empty()) out.push_back(sep);
        out += deficit_type_name(t);
    }
    return out;
}

std::string findings_text(const std::vector<DeficitFinding>& findings) {
    std::ostringstream out;
    out << "findings=" << findings.size() << "\n";
    std::size_t index = 0;
    for (const DeficitFinding& f : findings) {
        out << "[" << ++index << "] " << finding_kind_name(f.kind)
            << " candidates=" << candidates_joined(f, ';') << " locus="
            << signed_order(f.locus) << " support=" << f.support << "\n";
        for (const FindingEvidence& ev : f.evidence) {
            out << "    " << result_class_name(ev.result) << " x"
                << ev.provenance.size() << " " << join_labels(ev.labels)
                << "\n";
        }
    }
    if (!findings.empty()) {
        out << "summary\n";
        for (const DeficitSummaryRow& row : summarize(findings)) {
            out << "  " << deficit_type_name(row.type) << " locus="
                << signed_order(row.locus) << " findings=" << row.findings
                << " support=" << row.support;
            out << " chains=";
            for (std::size_t i = 0; i < row.top_chains.size(); ++i) {
                if (i > 0) out << ';';
                out << row.top_chains[i];
            }
            out << "\n";
        }
    }
    return out.str();
}

std::string findings_json(const std::vector<DeficitFinding>& findings) {
    ordered_json j;
    ordered_json list = ordered_json::array();
    for (const DeficitFinding& f : findings) {
        ordered_json fj;
        fj["kind"] = finding_kind_name(f.kind);
        ordered_json candidates = ordered_json::array();
        for (DeficitType t : f.candidates) {
            candidates.push_back(deficit_type_name(t));
        }
        fj["candidates"] = std::move(candidates);
        fj["locus"] = order_value(f.locus);
        fj["support"] = f.support;
        ordered_json evidence = ordered_json::array();
        for (const FindingEvidence& ev : f.evidence) {
            ordered_json labels = ordered_json::array();
            for (const std::string& l : ev.labels) labels.push_back(l);
            evidence.push_back(
                ordered_json{{"chain", labels},
                             {"result", result_class_name(ev.result)},
                             {"provenance", provenance_json(ev.provenance)}});
        }
        fj["evidence"] = std::move(evidence);
        list.push_back(std::move(fj));
    }
    j["findings"] = std::move(list);

    ordered_json summary = ordered_json::array();
    for (const DeficitSummaryRow& row : summarize(findings)) {
        ordered_json chains = ordered_json::array();
        for (const std::string& c : row.top_chains) chains.push_back(c);
        summary.push_back(ordered_json{{"type", deficit_type_name(row.type)},
                                       {"locus", order_value(row.locus)},
                                       {"findings", row.findings},
                                       {"support", row.support},
                                       {"chains", chains}});
    }
    j["summary"] = std::move(summary);
    return j.dump(2) + "\n";
}

std::string findings_csv(const std::vector<DeficitFinding>& findings) {
    std::ostringstream out;
    out << "kind,candidates,locus,support,chains\n";
    for (const DeficitFinding& f : findings) {
        out << finding_kind_name(f.kind) << ',' << candidates_joined(f, ';')
            << ',' << order_value(f.locus) << ',' << f.support << ',';
        for (std::size_t i = 0; i < f.evidence.size(); ++i) {
            if (i > 0) out << ';';
            out << join_labels(f.evidence[i].labels);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace

std::string render_findings(const std::vector<DeficitFinding>& findings,
                            OutputFormat format) {
    switch (format) {
        case OutputFormat::Text: return findings_text(findings);
        case OutputFormat::Json: return findings_json(findings);
        case OutputFormat::Csv: return findings_csv(findings);
        case OutputFormat::Dot:
            throw Error(ErrorCode::ValidationError,
                        "dot output applies to the graph subcommand only");
    }
    return {};
}

std::string render_stats(const CampaignStats& stats,
                         const std::string& campaign_id) {
    std::ostringstream out;
    out << "campaign " << campaign_id << " runs=" << stats.runs
        << " frames=" << stats.frames << " ground_truth=" << stats.ground_truth
        << " predictions=" << stats.predictions << "\n";
    for (std::size_t i = 0; i < kAllOrders.size(); ++i) {
        out << "entities[" << signed_order(kAllOrders[i])
            << "]=" << stats.entities_per_order[i];
        out << (i + 1 < kAllOrders.size() ? " " : "\n");
    }
    return out.str();
}

}  // namespace eerg
