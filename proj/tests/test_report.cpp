#include "eerg/report.hpp"

#include <doctest.h>

#include "eerg/campaign_io.hpp"
#include "eerg/synthesis.hpp"
#include "support/dot_checker.hpp"
#include "support/fixtures.hpp"

using namespace eerg;

namespace {

RelationGraph reference_graph() {
    Campaign c = reference_campaign();
    CampaignClassification classification = classify_campaign(c);
    return RelationGraph::build(classification.relations,
                                classification.registry);
}

}  // namespace

TEST_CASE("evaluation report counts and conservation lines") {
    Campaign c = reference_campaign();
    EvaluationReport report = evaluate(c.id, classify_campaign(c));
    REQUIRE(report.runs.size() == 2);
    CHECK(report.runs[0].run_id == "rural");
    CHECK(report.runs[1].run_id == "urban");
    for (const EvaluationRow& row : report.runs) CHECK(row.conserved());
    CHECK(report.total.conserved());
    CHECK(report.total.ground_truth == 12);
    // Frozen counts of the hand-encoded fixture: every failure class occurs.
    CHECK(report.total.counts ==
          std::array<std::uint64_t, 4>{4, 4, 4, 1});

    std::string text = render_evaluation(report, OutputFormat::Text);
    CHECK(text.find("conservation=ok") != std::string::npos);
    CHECK(text.find("campaign reference-showcase") != std::string::npos);

    std::string csv = render_evaluation(report, OutputFormat::Csv);
    CHECK(csv.find("run,R0,R1,R2,R3,ground_truth,predictions,conserved") == 0);

    CHECK_THROWS_AS((void)render_evaluation(report, OutputFormat::Dot), Error);
}

TEST_CASE("graph text format lists sorted chains with explicit counts") {
    RelationGraph g = reference_graph();
    std::string text = render_graph(g, OutputFormat::Text);
    CHECK(text.find("eerg-graph format=1") == 0);
    CHECK(text.find("chain City-Downtown-Ground-BidirectionalLane R0=0 R1=2 "
                    "R2=0 R3=0") != std::string::npos);
    // Sorted by label sequence: Downtown chains before Rural chains.
    CHECK(text.find("City-Downtown-Ground-BidirectionalLane") <
          text.find("City-Rural-Ground-BidirectionalLane"));
}

TEST_CASE("dot export parses and carries the scene nodes and relation records") {
    RelationGraph g = reference_graph();
    std::string dot = render_graph(g, OutputFormat::Dot);

    auto parsed = dotcheck::check_dot(dot);
    CHECK_MESSAGE(parsed.ok, parsed.error);

    CHECK(dot.find("\"+2:Downtown\"") != std::string::npos);
    CHECK(dot.find("\"+2:Rural\"") != std::string::npos);
    CHECK(dot.find("\"+3:City\" -> \"+2:Downtown\";") != std::string::npos);
    CHECK(dot.find("R1=2") != std::string::npos);  // downtown lane record
    CHECK(dot.find("shape=note") != std::string::npos);
}

TEST_CASE("empty campaign exports an empty graph body") {
    auto registry = std::make_shared<EntityRegistry>();
    registry->freeze();
    RelationGraph g = RelationGraph::build({}, registry);
    std::string dot = render_graph(g, OutputFormat::Dot);
    auto parsed = dotcheck::check_dot(dot);
    CHECK(parsed.ok);
    CHECK(dot.find("->") == std::string::npos);
}

TEST_CASE("per-run graphs merged equal the single-shot export") {
    Campaign c = reference_campaign();
    CampaignClassification classification = classify_campaign(c);
    RelationGraph whole = RelationGraph::build(classification.relations,
                                               classification.registry);

    std::vector<ClassifiedRelation> urban, rural;
    for (const ClassifiedRelation& rel : classification.relations) {
        (rel.run_id == "urban" ? urban : rural).push_back(rel);
    }
    RelationGraph merged =
        merge(RelationGraph::build(urban, classification.registry),
              RelationGraph::build(rural, classification.registry));

    for (OutputFormat format : {OutputFormat::Text, OutputFormat::Dot,
                                OutputFormat::Csv, OutputFormat::Json}) {
        CHECK(render_graph(merged, format) == render_graph(whole, format));
    }
}

TEST_CASE("findings renderers cover all formats deterministically") {
    RelationGraph g = reference_graph();
    auto findings = detect_all(g, 1);
    REQUIRE(!findings.empty());

    std::string text = render_findings(findings, OutputFormat::Text);
    CHECK(text.find("summary") != std::string::npos);
    CHECK(text == render_findings(detect_all(g, 1), OutputFormat::Text));

    std::string csv = render_findings(findings, OutputFormat::Csv);
    CHECK(csv.find("kind,candidates,locus,support,chains") == 0);

    std::string json = render_findings(findings, OutputFormat::Json);
    CHECK(json.find("\"findings\"") != std::string::npos);

    CHECK_THROWS_AS((void)render_findings(findings, OutputFormat::Dot), Error);
}

TEST_CASE("dot output stays valid across random synthetic campaigns") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthResult result = generate(
            demo_spec(kAllDeficitTypes[seed % kAllDeficitTypes.size()], seed));
        CampaignClassification classification =
            classify_campaign(result.campaign);
        RelationGraph g = RelationGraph::build(classification.relations,
                                               classification.registry);
        auto parsed = dotcheck::check_dot(render_graph(g, OutputFormat::Dot));
        CHECK_MESSAGE(parsed.ok, parsed.error);
    }
}

TEST_CASE("dot checker rejects malformed graphs") {
    CHECK(!dotcheck::check_dot("digraph { \"a\" -> }").ok);
    CHECK(!dotcheck::check_dot("graph g { a -> b; }").ok);  // -> in graph
    CHECK(!dotcheck::check_dot("digraph g { a [label=\"x]; }").ok);
    CHECK(dotcheck::check_dot("digraph g { a -> b [w=1]; c; }").ok);
}

TEST_CASE("unknown output format name is rejected") {
    CHECK_THROWS_AS((void)output_format_from_name("yaml"), Error);
    CHECK(output_format_from_name("dot") == OutputFormat::Dot);
}
