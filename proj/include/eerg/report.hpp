#pragma once

// Renderers for the CLI: evaluation counts, graph exports (text, json,
// csv, dot) and deficit-finding reports. All output is byte-stable for
// identical inputs.

#include "eerg/deficits.hpp"

namespace eerg {

enum class OutputFormat { Text, Json, Csv, Dot };

OutputFormat output_format_from_name(std::string_view name);  // throws ParseError

struct EvaluationRow {
    std::string run_id;
    std::array<std::uint64_t, 4> counts{};  // by result class
    std::uint64_t ground_truth = 0;
    std::uint64_t predictions = 0;

    bool conserved() const {
        return counts[0] + counts[1] + counts[2] == ground_truth &&
               counts[0] + counts[1] + counts[3] == predictions;
    }
};

struct EvaluationReport {
    std::string campaign_id;
    std::vector<EvaluationRow> runs;  // sorted by run_id
    EvaluationRow total;
};

EvaluationReport evaluate(const std::string& campaign_id,
                          const CampaignClassification& classification);

// Text, json or csv; Dot is rejected.
std::string render_evaluation(const EvaluationReport& report,
                              OutputFormat format);

// One node per entity (id "<order>:<label>"), one edge per registry
// edge, one annotated record per relation chain with its class counts.
std::string render_graph(const RelationGraph& graph, OutputFormat format);

std::string render_findings(const std::vector<DeficitFinding>& findings,
                            OutputFormat format);

std::string render_stats(const CampaignStats& stats,
                         const std::string& campaign_id);

}  // namespace eerg
