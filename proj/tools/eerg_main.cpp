// Command-line front end: validate, evaluate, graph, findings, synth.
//
// Exit codes: 0 success (findings: none found), 1 validation or parse
// failure, 2 I/O failure, 3 findings present (CI gate). Flags mirror
// environment variables with the EERG_ prefix.

#include "eerg/campaign_io.hpp"
#include "eerg/report.hpp"
#include "eerg/synthesis.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace eerg;

struct CommonOptions {
    std::string input;
    std::string output;
    double iou_threshold = 0.5;
    double min_confidence = 0.0;
    std::uint64_t min_support = 1;
    bool permissive = false;
    bool dedupe_per_run = false;
    std::string format = "text";
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool with_support) {
    cmd->add_option("campaign", opt.input, "campaign file")->required();
    cmd->add_option("-o,--output", opt.output,
                    "write output to this file instead of stdout");
    cmd->add_option("--iou-threshold", opt.iou_threshold,
                    "tolerable-deviation threshold in (0, 1]")
        ->envname("EERG_IOU_THRESHOLD");
    cmd->add_option("--min-confidence", opt.min_confidence,
                    "drop predictions below this confidence before matching")
        ->envname("EERG_MIN_CONFIDENCE");
    if (with_support) {
        cmd->add_option("--min-support", opt.min_support,
                        "minimum observations per reported chain")
            ->envname("EERG_MIN_SUPPORT");
    }
    cmd->add_flag("--permissive,!--strict", opt.permissive,
                  "register unknown chain entities instead of rejecting")
        ->envname("EERG_PERMISSIVE");
    cmd->add_flag("--dedupe-per-run", opt.dedupe_per_run,
                  "count one relation per run instead of per frame")
        ->envname("EERG_DEDUPE_PER_RUN");
    cmd->add_option("--format", opt.format, "text|json|csv|dot")
        ->envname("EERG_FORMAT");
}

void emit(const CommonOptions& opt, const std::string& content) {
    if (opt.output.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError,
                    "cannot open '" + opt.output + "' for writing");
    }
    out << content;
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed for '" + opt.output + "'");
    }
}

ChainParseMode parse_mode(const CommonOptions& opt) {
    return opt.permissive ? ChainParseMode::Permissive
                          : ChainParseMode::Strict;
}

ClassifyOptions classify_options(const CommonOptions& opt) {
    ClassifyOptions options;
    options.match.iou_threshold = opt.iou_threshold;
    options.min_confidence = opt.min_confidence;
    options.dedupe_per_run = opt.dedupe_per_run;
    return options;
}

int cmd_validate(const CommonOptions& opt) {
    Campaign campaign = load_campaign(opt.input, parse_mode(opt));
    emit(opt, render_stats(campaign_stats(campaign), campaign.id) + "valid\n");
    return 0;
}

int cmd_evaluate(const CommonOptions& opt) {
    Campaign campaign = load_campaign(opt.input, parse_mode(opt));
    CampaignClassification classification =
        classify_campaign(campaign, classify_options(opt));
    emit(opt, render_evaluation(evaluate(campaign.id, classification),
                                output_format_from_name(opt.format)));
    return 0;
}

int cmd_graph(const CommonOptions& opt) {
    Campaign campaign = load_campaign(opt.input, parse_mode(opt));
    CampaignClassification classification =
        classify_campaign(campaign, classify_options(opt));
    RelationGraph graph = RelationGraph::build(classification.relations,
                                               classification.registry);
    emit(opt, render_graph(graph, output_format_from_name(opt.format)));
    return 0;
}

int cmd_findings(const CommonOptions& opt) {
    Campaign campaign = load_campaign(opt.input, parse_mode(opt));
    CampaignClassification classification =
        classify_campaign(campaign, classify_options(opt));
    RelationGraph graph = RelationGraph::build(classification.relations,
                                               classification.registry);
    std::vector<DeficitFinding> findings = detect_all(graph, opt.min_support);
    emit(opt, render_findings(findings, output_format_from_name(opt.format)));
    return findings.empty() ? 0 : 3;
}

struct SynthOptions {
    std::string spec_path;
    std::string out_dir;
    std::string demo_type;
    bool reference = false;
    std::uint64_t seed = 1;
};

int cmd_synth(const SynthOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);
    std::filesystem::path campaign_path =
        std::filesystem::path(opt.out_dir) / "campaign.jsonl";

    if (opt.reference) {
        Campaign campaign = reference_campaign();
        save_campaign(campaign, campaign_path);
        std::cout << render_stats(campaign_stats(campaign), campaign.id);
        std::cout << "wrote " << campaign_path.string() << "\n";
        return 0;
    }

    SynthSpec spec;
    if (!opt.demo_type.empty()) {
        spec = demo_spec(deficit_type_from_name(opt.demo_type), opt.seed);
    } else {
        spec = load_synth_spec(opt.spec_path);
    }

    SynthResult result = generate(spec);
    save_campaign(result.campaign, campaign_path);
    std::filesystem::path manifest_path =
        std::filesystem::path(opt.out_dir) / "expected_findings.jsonl";
    {
        std::ofstream out(manifest_path, std::ios::binary);
        if (!out) {
            throw Error(ErrorCode::IoError,
                        "cannot open '" + manifest_path.string() +
                            "' for writing");
        }
        out << serialize_manifest(result, result.campaign.id);
    }

    std::cout << render_stats(campaign_stats(result.campaign),
                              result.campaign.id);
    for (const ExpectedFinding& e : result.expected) {
        std::cout << "expect " << finding_kind_name(e.kind) << " "
                  << deficit_type_name(e.type) << " locus="
                  << order_value(e.locus) << " support=" << e.support << "\n";
    }
    std::cout << "wrote " << campaign_path.string() << " and "
              << manifest_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Environmental-entity relation-graph evaluation toolkit"};
    app.require_subcommand(1);

    CommonOptions validate_opt, evaluate_opt, graph_opt, findings_opt;
    SynthOptions synth_opt;

    CLI::App* validate =
        app.add_subcommand("validate", "load a campaign and check invariants");
    validate->add_option("campaign", validate_opt.input, "campaign file")
        ->required();
    validate->add_flag("--permissive,!--strict", validate_opt.permissive,
                       "register unknown chain entities instead of rejecting")
        ->envname("EERG_PERMISSIVE");

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "result-class counts per run");
    add_common_flags(evaluate, evaluate_opt, false);

    CLI::App* graph =
        app.add_subcommand("graph", "export the relation graph");
    add_common_flags(graph, graph_opt, false);

    CLI::App* findings =
        app.add_subcommand("findings", "mine deficit findings (exit 3 if any)");
    add_common_flags(findings, findings_opt, true);

    CLI::App* synth = app.add_subcommand(
        "synth", "generate a synthetic campaign plus its expected findings");
    synth->add_option("spec", synth_opt.spec_path, "synth spec JSON file");
    synth->add_option("--out-dir", synth_opt.out_dir, "output directory")
        ->required();
    synth->add_option("--demo", synth_opt.demo_type,
                      "canned single-deficit spec for this deficit type");
    synth->add_flag("--reference", synth_opt.reference,
                    "write the hand-encoded reference campaign");
    synth->add_option("--seed", synth_opt.seed, "seed for --demo specs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Collapse usage errors onto the documented contract: 0 for
        // --help and friends, 1 for anything wrong on the command line.
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_opt);
        if (evaluate->parsed()) return cmd_evaluate(evaluate_opt);
        if (graph->parsed()) return cmd_graph(graph_opt);
        if (findings->parsed()) return cmd_findings(findings_opt);
        if (synth->parsed()) {
            if (!synth_opt.reference && synth_opt.demo_type.empty() &&
                synth_opt.spec_path.empty()) {
                std::cerr << "error: synth needs a spec file, --demo or "
                             "--reference\n";
                return 1;
            }
            return cmd_synth(synth_opt);
        }
    } catch (const eerg::Error& e) {
        std::cerr << "error: " << eerg::error_code_name(e.code()) << ": "
                  << e.what() << "\n";
        return e.code() == eerg::ErrorCode::IoError ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
