#include "eerg/ontology.hpp"

#include <algorithm>
#include <charconv>

namespace eerg {

namespace {

constexpr std::array<std::string_view, kOrderCount> kOrderNames = {
    // Indexed by value + 3.
    "Element", "Component", "Module", "Instance", "Group", "Scene", "Domain",
};

}  // namespace

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::OrderMismatch: return "OrderMismatch";
        case ErrorCode::InvalidLabel: return "InvalidLabel";
        case ErrorCode::InvalidOrder: return "InvalidOrder";
        case ErrorCode::ChainTooLong: return "ChainTooLong";
        case ErrorCode::UnknownEntity: return "UnknownEntity";
        case ErrorCode::EmptySegment: return "EmptySegment";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::AmbientMissing: return "AmbientMissing";
        case ErrorCode::UnknownChain: return "UnknownChain";
        case ErrorCode::RegistryMismatch: return "RegistryMismatch";
        case ErrorCode::RegistryFrozen: return "RegistryFrozen";
        case ErrorCode::SpecError: return "SpecError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

GranularityOrder order_from_value(int value) {
    if (value < kOrderMin || value > kOrderMax) {
        throw Error(ErrorCode::InvalidOrder,
                    "granularity order " + std::to_string(value) +
                        " outside [-3, +3]");
    }
    return static_cast<GranularityOrder>(value);
}

std::string_view order_name(GranularityOrder o) {
    return kOrderNames[static_cast<std::size_t>(order_value(o) - kOrderMin)];
}

GranularityOrder order_from_name(std::string_view name) {
    for (GranularityOrder o : kAllOrders) {
        if (order_name(o) == name) return o;
    }
    int v = 0;
    auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), v);
    if (ec == std::errc() && ptr == name.data() + name.size()) {
        return order_from_value(v);
    }
    throw Error(ErrorCode::InvalidOrder,
                "unknown granularity order '" + std::string(name) + "'");
}

bool valid_label(std::string_view label) {
    return !label.empty() &&
           label.find(kChainSeparator) == std::string_view::npos;
}

void EntityRegistry::require_mutable() const {
    if (frozen_) {
        throw Error(ErrorCode::RegistryFrozen, "registry is frozen");
    }
}

EntityId EntityRegistry::add(std::string_view label, GranularityOrder order,
                             std::optional<EntityId> parent, bool synthetic) {
    require_mutable();
    if (!valid_label(label)) {
        throw Error(ErrorCode::InvalidLabel,
                    "label '" + std::string(label) +
                        "' is empty or contains the chain separator");
    }
    if (parent) {
        const EnvironmentalEntity& p = entity(*parent);
        if (order_value(p.order) != order_value(order) + 1) {
            throw Error(ErrorCode::OrderMismatch,
                        "parent '" + p.label + "' at order " +
                            std::to_string(order_value(p.order)) +
                            " is not one order above '" + std::string(label) +
                            "' at " + std::to_string(order_value(order)));
        }
    }

    EntityId id;
    auto key = std::make_pair(order_value(order), std::string(label));
    if (auto it = by_order_label_.find(key); it != by_order_label_.end()) {
        id = it->second;
    } else {
        id = EntityId{static_cast<std::uint32_t>(entities_.size())};
        entities_.push_back(
            {id, std::string(label), order, synthetic});
        by_order_label_.emplace(std::move(key), id);
    }
    if (parent) {
        edges_.emplace(*parent, id);
    }
    return id;
}

EntityId EntityRegistry::register_entity(std::string_view label,
                                         GranularityOrder order,
                                         std::optional<EntityId> parent) {
    return add(label, order, parent, false);
}

EntityId EntityRegistry::register_synthetic(std::string_view label,
                                            GranularityOrder order,
                                            std::optional<EntityId> parent) {
    return add(label, order, parent, true);
}

EntityRegistry EntityRegistry::unfrozen_copy() const {
    EntityRegistry copy = *this;
    copy.frozen_ = false;
    return copy;
}

void EntityRegistry::add_edge(EntityId parent, EntityId child) {
    require_mutable();
    const EnvironmentalEntity& p = entity(parent);
    const EnvironmentalEntity& c = entity(child);
    if (order_value(p.order) != order_value(c.order) + 1) {
        throw Error(ErrorCode::OrderMismatch,
                    "edge " + p.label + " -> " + c.label +
                        " does not connect adjacent orders");
    }
    edges_.emplace(parent, child);
}

const EnvironmentalEntity& EntityRegistry::entity(EntityId id) const {
    if (id.value >= entities_.size()) {
        throw Error(ErrorCode::UnknownEntity,
                    "entity id " + std::to_string(id.value) + " not registered");
    }
    return entities_[id.value];
}

std::optional<EntityId> EntityRegistry::find(std::string_view label,
                                             GranularityOrder order) const {
    auto it = by_order_label_.find(
        std::make_pair(order_value(order), std::string(label)));
    if (it == by_order_label_.end()) return std::nullopt;
    return it->second;
}

bool EntityRegistry::has_edge(EntityId parent, EntityId child) const {
    return edges_.count({parent, child}) != 0;
}

std::size_t EntityRegistry::count_at(GranularityOrder order) const {
    return static_cast<std::size_t>(
        std::count_if(entities_.begin(), entities_.end(),
                      [order](const auto& e) { return e.order == order; }));
}

std::vector<EntityId> EntityRegistry::children(EntityId parent) const {
    std::vector<EntityId> out;
    for (const auto& [p, c] : edges_) {
        if (p == parent) out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [this](EntityId a, EntityId b) {
        return entities_[a.value].label < entities_[b.value].label;
    });
    return out;
}

std::vector<EntityId> EntityRegistry::at_order(GranularityOrder order) const {
    std::vector<EntityId> out;
    for (const auto& e : entities_) {
        if (e.order == order) out.push_back(e.id);
    }
    std::sort(out.begin(), out.end(), [this](EntityId a, EntityId b) {
        return entities_[a.value].label < entities_[b.value].label;
    });
    return out;
}

bool EntityRegistry::operator==(const EntityRegistry& other) const {
    if (entities_.size() != other.entities_.size()) return false;
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        const auto& a = entities_[i];
        const auto& b = other.entities_[i];
        if (a.label != b.label || a.order != b.order ||
            a.synthetic != b.synthetic) {
            return false;
        }
    }
    return edges_ == other.edges_;
}

RelationChain RelationChain::from_ids(const EntityRegistry& registry,
                                      std::vector<EntityId> ids) {
    if (ids.empty()) {
        throw Error(ErrorCode::EmptySegment, "relation chain has no entities");
    }
    if (ids.size() > kMaxChainLength) {
        throw Error(ErrorCode::ChainTooLong,
                    "relation chain has " + std::to_string(ids.size()) +
                        " entities, maximum is " +
                        std::to_string(kMaxChainLength));
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const EnvironmentalEntity& e = registry.entity(ids[i]);
        int expected = kOrderMax - static_cast<int>(i);
        if (order_value(e.order) != expected) {
            throw Error(ErrorCode::OrderMismatch,
                        "chain entity '" + e.label + "' at position " +
                            std::to_string(i) + " has order " +
                            std::to_string(order_value(e.order)) +
                            ", expected " + std::to_string(expected));
        }
        if (i > 0 && !registry.has_edge(ids[i - 1], ids[i])) {
            throw Error(ErrorCode::UnknownEntity,
                        "no registry edge " +
                            registry.entity(ids[i - 1]).label + " -> " +
                            e.label);
        }
    }
    return RelationChain(std::move(ids));
}

GranularityOrder RelationChain::terminal_order() const {
    return static_cast<GranularityOrder>(kOrderMax -
                                         static_cast<int>(ids_.size()) + 1);
}

std::optional<std::size_t> RelationChain::index_of_order(
    GranularityOrder order) const {
    int idx = kOrderMax - order_value(order);
    if (idx < 0 || static_cast<std::size_t>(idx) >= ids_.size()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(idx);
}

namespace {

std::vector<std::string> split_chain_text(std::string_view text) {
    std::vector<std::string> segments;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(kChainSeparator, start);
        std::string_view seg = (pos == std::string_view::npos)
                                   ? text.substr(start)
                                   : text.substr(start, pos - start);
        if (seg.empty()) {
            throw Error(ErrorCode::EmptySegment,
                        "empty segment in chain text '" + std::string(text) +
                            "'");
        }
        segments.emplace_back(seg);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return segments;
}

}  // namespace

RelationChain parse_chain(EntityRegistry& registry, std::string_view text,
                          ChainParseMode mode) {
    std::vector<std::string> segments = split_chain_text(text);
    if (segments.size() > kMaxChainLength) {
        throw Error(ErrorCode::ChainTooLong,
                    "chain '" + std::string(text) + "' has " +
                        std::to_string(segments.size()) +
                        " segments, maximum is " +
                        std::to_string(kMaxChainLength));
    }

    std::vector<EntityId> ids;
    ids.reserve(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
        GranularityOrder order =
            order_from_value(kOrderMax - static_cast<int>(i));
        std::optional<EntityId> existing = registry.find(segments[i], order);
        std::optional<EntityId> parent =
            ids.empty() ? std::nullopt : std::optional<EntityId>(ids.back());

        if (mode == ChainParseMode::Strict) {
            if (!existing) {
                throw Error(ErrorCode::UnknownEntity,
                            "unknown entity '" + segments[i] + "' at order " +
                                std::to_string(order_value(order)) +
                                " in chain '" + std::string(text) + "'");
            }
            if (parent && !registry.has_edge(*parent, *existing)) {
                throw Error(ErrorCode::UnknownEntity,
                            "no registry edge " +
                                registry.entity(*parent).label + " -> " +
                                segments[i] + " in chain '" +
                                std::string(text) + "'");
            }
            ids.push_back(*existing);
        } else if (existing &&
                   (!parent || registry.has_edge(*parent, *existing))) {
            ids.push_back(*existing);
        } else {
            ids.push_back(registry.register_entity(segments[i], order, parent));
        }
    }
    return RelationChain::from_ids(registry, std::move(ids));
}

RelationChain parse_chain(const EntityRegistry& registry,
                          std::string_view text) {
    // Strict mode never mutates, so the const_cast stays local.
    return parse_chain(const_cast<EntityRegistry&>(registry), text,
                       ChainParseMode::Strict);
}

std::string format_chain(const EntityRegistry& registry,
                         const RelationChain& chain) {
    std::string out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i > 0) out.push_back(kChainSeparator);
        out += registry.entity(chain.at(i)).label;
    }
    return out;
}

std::vector<std::string> chain_labels(const EntityRegistry& registry,
                                      const RelationChain& chain) {
    std::vector<std::string> out;
    out.reserve(chain.size());
    for (EntityId id : chain.ids()) {
        out.push_back(registry.entity(id).label);
    }
    return out;
}

bool is_prefix(const RelationChain& a, const RelationChain& b) {
    if (a.size() > b.size()) return false;
    return std::equal(a.ids().begin(), a.ids().end(), b.ids().begin());
}

}  // namespace eerg
