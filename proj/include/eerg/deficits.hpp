#pragma once

// Maps relation-graph evidence to the seven object-recognition deficit
// types. Explicit findings come from failure-only chains; implicit
// findings from ambivalence sets. The mapping yields candidates, not
// verdicts: each finding is a hypothesis to be argued from its evidence.

#include "eerg/relation_graph.hpp"

namespace eerg {

enum class DeficitType {
    IncompleteDomainKnowledge,
    ForegroundBackground,
    ForegroundForeground,
    IncompleteObjectRepresentation,
    IncompleteRotaryRepresentation,
    MissingAttributeIntegration,
    FaultyPatternAssociation,
};

inline constexpr std::array<DeficitType, 7> kAllDeficitTypes = {
    DeficitType::IncompleteDomainKnowledge,
    DeficitType::ForegroundBackground,
    DeficitType::ForegroundForeground,
    DeficitType::IncompleteObjectRepresentation,
    DeficitType::IncompleteRotaryRepresentation,
    DeficitType::MissingAttributeIntegration,
    DeficitType::FaultyPatternAssociation,
};

const char* deficit_type_name(DeficitType t);
DeficitType deficit_type_from_name(std::string_view name);  // throws ParseError

// Fixed decision table, one deficit type per granularity order:
//   +3 Domain    -> IncompleteDomainKnowledge
//   +2 Scene     -> ForegroundBackground
//   +1 Group     -> ForegroundForeground
//    0 Instance  -> IncompleteObjectRepresentation
//   -1 Module    -> IncompleteRotaryRepresentation
//   -2 Component -> MissingAttributeIntegration
//   -3 Element   -> FaultyPatternAssociation
std::vector<DeficitType> order_to_deficits(GranularityOrder order);
GranularityOrder deficit_locus(DeficitType t);  // inverse of the table

enum class FindingKind { Explicit, Implicit };

const char* finding_kind_name(FindingKind kind);
FindingKind finding_kind_from_name(std::string_view name);  // throws ParseError

struct FindingEvidence {
    RelationChain chain;
    std::vector<std::string> labels;
    // Dominant class for implicit members; the failure class for
    // explicit evidence.
    ResultClass result = ResultClass::R0;
    std::vector<ProvenanceEntry> provenance;
};

struct DeficitFinding {
    FindingKind kind = FindingKind::Explicit;
    std::vector<DeficitType> candidates;  // non-empty
    // Divergence order for implicit findings; deepest annotated order of
    // the failing chain for explicit findings.
    GranularityOrder locus = GranularityOrder::Instance;
    std::vector<FindingEvidence> evidence;
    std::uint64_t support = 0;
};

// One finding per failure-only chain (no R0 observations) that is not a
// member of any ambivalence set at the given support; such chains are
// reported by detect_implicit instead. Phantom chains map to
// FaultyPatternAssociation when a co-frame chain is annotated down to
// order -3, else to IncompleteObjectRepresentation.
std::vector<DeficitFinding> detect_explicit(const RelationGraph& g,
                                            std::uint64_t min_support = 1);

// One finding per ambivalence set.
std::vector<DeficitFinding> detect_implicit(const RelationGraph& g,
                                            std::uint64_t min_support = 1);

// Explicit and implicit findings in one deterministically ordered list.
std::vector<DeficitFinding> detect_all(const RelationGraph& g,
                                       std::uint64_t min_support = 1);

struct DeficitSummaryRow {
    DeficitType type = DeficitType::IncompleteDomainKnowledge;
    GranularityOrder locus = GranularityOrder::Instance;
    std::size_t findings = 0;
    std::uint64_t support = 0;
    std::vector<std::string> top_chains;  // up to three, '-'-joined
};

// Lossless grouping of findings by (type, locus).
std::vector<DeficitSummaryRow> summarize(
    const std::vector<DeficitFinding>& findings);

}  // namespace eerg
