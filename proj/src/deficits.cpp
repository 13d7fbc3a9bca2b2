#include "eerg/deficits.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace eerg {

const char* deficit_type_name(DeficitType t) {
    switch (t) {
        case DeficitType::IncompleteDomainKnowledge:
            return "IncompleteDomainKnowledge";
        case DeficitType::ForegroundBackground:
            return "ForegroundBackground";
        case DeficitType::ForegroundForeground:
            return "ForegroundForeground";
        case DeficitType::IncompleteObjectRepresentation:
            return "IncompleteObjectRepresentation";
        case DeficitType::IncompleteRotaryRepresentation:
            return "IncompleteRotaryRepresentation";
        case DeficitType::MissingAttributeIntegration:
            return "MissingAttributeIntegration";
        case DeficitType::FaultyPatternAssociation:
            return "FaultyPatternAssociation";
    }
    return "UnknownDeficit";
}

DeficitType deficit_type_from_name(std::string_view name) {
    for (DeficitType t : kAllDeficitTypes) {
        if (name == deficit_type_name(t)) return t;
    }
    throw Error(ErrorCode::ParseError,
                "unknown deficit type '" + std::string(name) + "'");
}

std::vector<DeficitType> order_to_deficits(GranularityOrder order) {
    switch (order) {
        case GranularityOrder::Domain:
            return {DeficitType::IncompleteDomainKnowledge};
        case GranularityOrder::Scene:
            return {DeficitType::ForegroundBackground};
        case GranularityOrder::Group:
            return {DeficitType::ForegroundForeground};
        case GranularityOrder::Instance:
            return {DeficitType::IncompleteObjectRepresentation};
        case GranularityOrder::Module:
            return {DeficitType::IncompleteRotaryRepresentation};
        case GranularityOrder::Component:
            return {DeficitType::MissingAttributeIntegration};
        case GranularityOrder::Element:
            return {DeficitType::FaultyPatternAssociation};
    }
    throw Error(ErrorCode::InvalidOrder, "order outside [-3, +3]");
}

GranularityOrder deficit_locus(DeficitType t) {
    for (GranularityOrder o : kAllOrders) {
        if (order_to_deficits(o).front() == t) return o;
    }
    throw Error(ErrorCode::InvalidOrder, "unmapped deficit type");
}

const char* finding_kind_name(FindingKind kind) {
    return kind == FindingKind::Explicit ? "explicit" : "implicit";
}

FindingKind finding_kind_from_name(std::string_view name) {
    if (name == "explicit") return FindingKind::Explicit;
    if (name == "implicit") return FindingKind::Implicit;
    throw Error(ErrorCode::ParseError,
                "unknown finding kind '" + std::string(name) + "'");
}

namespace {

bool comes_before(const DeficitFinding& a, const DeficitFinding& b) {
    if (a.kind != b.kind) return a.kind == FindingKind::Explicit;
    if (a.locus != b.locus) return order_value(a.locus) > order_value(b.locus);
    return a.evidence.front().labels < b.evidence.front().labels;
}

}  // namespace

std::vector<DeficitFinding> detect_explicit(const RelationGraph& g,
                                            std::uint64_t min_support) {
    // Chains already explained by an ambivalence set surface through
    // detect_implicit; reporting them here as well would double-count
    // the same evidence at the wrong order.
    std::set<std::vector<std::string>> ambivalent;
    for (const AmbivalenceSet& set : find_ambivalences(g, min_support)) {
        for (const AmbivalenceMember& m : set.members) {
            ambivalent.insert(m.labels);
        }
    }

    // Frames that contain a chain annotated down to order -3; phantom
    // relations in such frames point at pattern triggers.
    std::set<std::pair<std::string, std::string>> element_frames;
    for (const RelationEntry& entry : g.entries()) {
        if (entry.chain.terminal_order() != GranularityOrder::Element) continue;
        for (const ProvenanceEntry& p : entry.provenance) {
            element_frames.insert({p.run_id, p.frame_id});
        }
    }

    std::vector<DeficitFinding> out;
    for (const RelationEntry& entry : g.entries()) {
        if (entry.counts[ResultClass::R0] != 0) continue;
        if (entry.counts.failures() == 0) continue;
        if (entry.counts.failures() < min_support) continue;
        if (ambivalent.count(entry.labels)) continue;

        DeficitFinding finding;
        finding.kind = FindingKind::Explicit;
        finding.locus = entry.chain.terminal_order();
        finding.support = entry.counts.failures();

        bool phantom =
            g.registry().entity(entry.chain.terminal()).synthetic &&
            entry.counts[ResultClass::R3] > 0;
        if (phantom) {
            bool trigger = std::any_of(
                entry.provenance.begin(), entry.provenance.end(),
                [&](const ProvenanceEntry& p) {
                    return element_frames.count({p.run_id, p.frame_id}) != 0;
                });
            finding.candidates = {trigger
                                      ? DeficitType::FaultyPatternAssociation
                                      : DeficitType::IncompleteObjectRepresentation};
        } else {
            finding.candidates = order_to_deficits(finding.locus);
        }

        for (ResultClass r :
             {ResultClass::R1, ResultClass::R2, ResultClass::R3}) {
            if (entry.counts[r] == 0) continue;
            FindingEvidence ev;
            ev.chain = entry.chain;
            ev.labels = entry.labels;
            ev.result = r;
            for (const ProvenanceEntry& p : entry.provenance) {
                if (p.result == r) ev.provenance.push_back(p);
            }
            finding.evidence.push_back(std::move(ev));
        }
        out.push_back(std::move(finding));
    }
    std::sort(out.begin(), out.end(), comes_before);
    return out;
}

std::vector<DeficitFinding> detect_implicit(const RelationGraph& g,
                                            std::uint64_t min_support) {
    std::vector<DeficitFinding> out;
    for (const AmbivalenceSet& set : find_ambivalences(g, min_support)) {
        DeficitFinding finding;
        finding.kind = FindingKind::Implicit;
        finding.candidates = order_to_deficits(set.divergence_order);
        finding.locus = set.divergence_order;
        finding.support = 0;
        for (const AmbivalenceMember& m : set.members) {
            FindingEvidence ev;
            ev.chain = m.chain;
            ev.labels = m.labels;
            ev.result = m.dominant;
            if (const RelationEntry* entry = g.find(m.chain)) {
                ev.provenance = entry->provenance;
            }
            finding.support = finding.support == 0
                                  ? m.total
                                  : std::min(finding.support, m.total);
            finding.evidence.push_back(std::move(ev));
        }
        out.push_back(std::move(finding));
    }
    std::sort(out.begin(), out.end(), comes_before);
    return out;
}

std::vector<DeficitFinding> detect_all(const RelationGraph& g,
                                       std::uint64_t min_support) {
    std::vector<DeficitFinding> out = detect_explicit(g, min_support);
    std::vector<DeficitFinding> implicit = detect_implicit(g, min_support);
    out.insert(out.end(), std::make_move_iterator(implicit.begin()),
               std::make_move_iterator(implicit.end()));
    std::sort(out.begin(), out.end(), comes_before);
    return out;
}

std::vector<DeficitSummaryRow> summarize(
    const std::vector<DeficitFinding>& findings) {
    std::map<std::pair<int, int>, DeficitSummaryRow> rows;
    std::map<std::pair<int, int>, std::set<std::string>> chains;
    for (const DeficitFinding& f : findings) {
        for (DeficitType t : f.candidates) {
            // Key sorts by locus descending, then table order of types.
            std::pair<int, int> key{-order_value(f.locus),
                                    static_cast<int>(t)};
            DeficitSummaryRow& row = rows[key];
            row.type = t;
            row.locus = f.locus;
            row.findings += 1;
            row.support += f.support;
            for (const FindingEvidence& ev : f.evidence) {
                std::string joined;
                for (const std::string& l : ev.labels) {
                    if (!joined.empty()) joined.push_back(kChainSeparator);
                    joined += l;
                }
                chains[key].insert(std::move(joined));
            }
        }
    }
    std::vector<DeficitSummaryRow> out;
    for (auto& [key, row] : rows) {
        const std::set<std::string>& cs = chains[key];
        for (auto it = cs.begin(); it != cs.end() && row.top_chains.size() < 3;
             ++it) {
            row.top_chains.push_back(*it);
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace eerg
