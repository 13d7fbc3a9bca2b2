#pragma once

// Granularity orders, the environmental-entity registry, and relation chains.
//
// A registry holds named entities, each pinned to one of the seven
// granularity orders (+3 Domain down to -3 Element), plus parent/child
// edges that may only connect adjacent orders. A relation chain is a
// validated path from the Domain order downward, one order per step.

#include "eerg/errors.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace eerg {

enum class GranularityOrder : int {
    Element = -3,
    Component = -2,
    Module = -1,
    Instance = 0,
    Group = 1,
    Scene = 2,
    Domain = 3,
};

inline constexpr int kOrderMin = -3;
inline constexpr int kOrderMax = 3;
inline constexpr std::size_t kOrderCount = 7;
inline constexpr std::size_t kMaxChainLength = 7;

// All seven orders, highest first.
inline constexpr std::array<GranularityOrder, kOrderCount> kAllOrders = {
    GranularityOrder::Domain,   GranularityOrder::Scene,
    GranularityOrder::Group,    GranularityOrder::Instance,
    GranularityOrder::Module,   GranularityOrder::Component,
    GranularityOrder::Element,
};

constexpr int order_value(GranularityOrder o) { return static_cast<int>(o); }

// Throws InvalidOrder for anything outside [-3, +3].
GranularityOrder order_from_value(int value);

std::string_view order_name(GranularityOrder o);

// Parses "Domain", "Scene", ... or a signed integer. Throws InvalidOrder.
GranularityOrder order_from_name(std::string_view name);

struct EntityId {
    std::uint32_t value = 0;
    auto operator<=>(const EntityId&) const = default;
};

struct EnvironmentalEntity {
    EntityId id;
    std::string label;
    GranularityOrder order = GranularityOrder::Instance;
    // Set for entities minted during classification (phantom chains),
    // never for entities declared by a campaign file.
    bool synthetic = false;
};

// Separator used by the chain text format; labels must not contain it.
inline constexpr char kChainSeparator = '-';

bool valid_label(std::string_view label);

// Registry of environmental entities and their adjacent-order edges.
//
// Single-writer while building; freeze() makes it immutable so it can be
// shared across threads without locking.
class EntityRegistry {
public:
    // Idempotent: registering the same (label, order) again returns the
    // existing id and only adds the missing parent edge.
    // Throws InvalidLabel, OrderMismatch, UnknownEntity, RegistryFrozen.
    EntityId register_entity(std::string_view label, GranularityOrder order,
                             std::optional<EntityId> parent = std::nullopt);

    // Same as register_entity but marks the entity as synthetic.
    EntityId register_synthetic(std::string_view label, GranularityOrder order,
                                std::optional<EntityId> parent = std::nullopt);

    // Adds a parent->child edge between already-registered entities.
    // Throws UnknownEntity, OrderMismatch, RegistryFrozen.
    void add_edge(EntityId parent, EntityId child);

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    // Mutable copy of a (possibly frozen) registry, used when
    // classification extends a campaign registry with synthetic entities.
    EntityRegistry unfrozen_copy() const;

    const EnvironmentalEntity& entity(EntityId id) const;  // throws UnknownEntity
    std::optional<EntityId> find(std::string_view label, GranularityOrder order) const;
    bool contains(EntityId id) const { return id.value < entities_.size(); }
    bool has_edge(EntityId parent, EntityId child) const;

    std::size_t size() const { return entities_.size(); }
    std::size_t count_at(GranularityOrder order) const;

    const std::vector<EnvironmentalEntity>& entities() const { return entities_; }
    const std::set<std::pair<EntityId, EntityId>>& edges() const { return edges_; }

    // Children of an entity, sorted by label.
    std::vector<EntityId> children(EntityId parent) const;
    // Entities at one order, sorted by label.
    std::vector<EntityId> at_order(GranularityOrder order) const;

    // Structural equality: same labels, orders, synthetic flags, and edges.
    bool operator==(const EntityRegistry& other) const;

private:
    EntityId add(std::string_view label, GranularityOrder order,
                 std::optional<EntityId> parent, bool synthetic);
    void require_mutable() const;

    std::vector<EnvironmentalEntity> entities_;
    std::map<std::pair<int, std::string>, EntityId, std::less<>> by_order_label_;
    std::set<std::pair<EntityId, EntityId>> edges_;
    bool frozen_ = false;
};

// Ordered path of entities starting at order +3 and descending one order
// per step. Instances are only obtainable through the validating factory
// or parse_chain, so a RelationChain is valid by construction.
class RelationChain {
public:
    RelationChain() = default;

    // Validates order descent, length and edges. Throws UnknownEntity,
    // ChainTooLong, OrderMismatch.
    static RelationChain from_ids(const EntityRegistry& registry,
                                  std::vector<EntityId> ids);

    const std::vector<EntityId>& ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    EntityId at(std::size_t i) const { return ids_.at(i); }
    EntityId terminal() const { return ids_.back(); }

    GranularityOrder terminal_order() const;
    // Index of a given order within the chain, if the chain is deep enough.
    std::optional<std::size_t> index_of_order(GranularityOrder order) const;

    auto operator<=>(const RelationChain&) const = default;

private:
    explicit RelationChain(std::vector<EntityId> ids) : ids_(std::move(ids)) {}

    std::vector<EntityId> ids_;
};

enum class ChainParseMode { Strict, Permissive };

// Parses "City-Parc-Static-House-Facade-Wall-Commercial" style text,
// highest order first. Strict mode requires every entity and edge to
// exist; permissive mode registers what is missing.
// Throws EmptySegment, ChainTooLong, UnknownEntity, InvalidLabel.
RelationChain parse_chain(EntityRegistry& registry, std::string_view text,
                          ChainParseMode mode);

// Strict-mode parse against a frozen registry.
RelationChain parse_chain(const EntityRegistry& registry, std::string_view text);

std::string format_chain(const EntityRegistry& registry, const RelationChain& chain);
std::vector<std::string> chain_labels(const EntityRegistry& registry,
                                      const RelationChain& chain);

// True iff a's entity sequence is a leading subsequence of b's.
bool is_prefix(const RelationChain& a, const RelationChain& b);

}  // namespace eerg
