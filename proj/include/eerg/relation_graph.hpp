#pragma once

// The aggregate relation graph: every classified relation chain with its
// per-class counts and provenance, plus the ambivalence mining that
// surfaces implicit deficits.

#include "eerg/matching.hpp"

#include <cstdint>
#include <span>

namespace eerg {

struct ProvenanceEntry {
    std::string run_id;
    std::string frame_id;
    ResultClass result = ResultClass::R0;

    auto operator<=>(const ProvenanceEntry&) const = default;
};

struct ClassCounts {
    std::array<std::uint64_t, 4> by_class{};

    std::uint64_t& operator[](ResultClass r) {
        return by_class[static_cast<std::size_t>(r)];
    }
    std::uint64_t operator[](ResultClass r) const {
        return by_class[static_cast<std::size_t>(r)];
    }
    std::uint64_t total() const {
        return by_class[0] + by_class[1] + by_class[2] + by_class[3];
    }
    std::uint64_t failures() const {
        return by_class[1] + by_class[2] + by_class[3];
    }
    // Class holding a strict majority of this chain's observations.
    std::optional<ResultClass> dominant() const;

    bool operator==(const ClassCounts&) const = default;
};

struct RelationEntry {
    RelationChain chain;
    std::vector<std::string> labels;
    ClassCounts counts;
    std::vector<ProvenanceEntry> provenance;  // sorted
};

class RelationGraph {
public:
    // Validates every chain against the registry (throws UnknownChain).
    // Entries are kept sorted lexicographically by label sequence.
    static RelationGraph build(std::span<const ClassifiedRelation> relations,
                               std::shared_ptr<const EntityRegistry> registry);

    const EntityRegistry& registry() const { return *registry_; }
    const std::shared_ptr<const EntityRegistry>& registry_ptr() const {
        return registry_;
    }
    const std::vector<RelationEntry>& entries() const { return entries_; }
    std::uint64_t total_relations() const;
    const RelationEntry* find(const RelationChain& chain) const;

private:
    std::shared_ptr<const EntityRegistry> registry_;
    std::vector<RelationEntry> entries_;

    friend RelationGraph merge(const RelationGraph&, const RelationGraph&);
};

// Element-wise count sum over structurally equal registries; associative
// and commutative in the counts. Throws RegistryMismatch.
RelationGraph merge(const RelationGraph& a, const RelationGraph& b);

struct AmbivalenceMember {
    RelationChain chain;
    std::vector<std::string> labels;
    ResultClass dominant = ResultClass::R0;
    std::uint64_t total = 0;
};

// Chains identical everywhere except at the divergence order, with at
// least two distinct dominant result classes among them.
struct AmbivalenceSet {
    GranularityOrder divergence_order = GranularityOrder::Scene;
    std::vector<std::string> shared_suffix;  // labels below the divergence
    std::vector<AmbivalenceMember> members;  // sorted by label sequence
};

// Mines divergence orders +3 down to -1. A chain participates only with
// a strict-majority dominant class and at least min_support observations.
// Results sorted by divergence order descending, then label order.
std::vector<AmbivalenceSet> find_ambivalences(const RelationGraph& g,
                                              std::uint64_t min_support);

struct QueryFilter {
    std::optional<EntityId> entity;          // chain must contain it
    std::optional<ResultClass> result;       // nonzero count of this class
    std::optional<GranularityOrder> terminal_order;
};

std::vector<const RelationEntry*> query(const RelationGraph& g,
                                        const QueryFilter& filter);

}  // namespace eerg
