#include "eerg/relation_graph.hpp"

#include <algorithm>
#include <map>

namespace eerg {

std::optional<ResultClass> ClassCounts::dominant() const {
    std::uint64_t sum = total();
    if (sum == 0) return std::nullopt;
    for (ResultClass r : kAllResultClasses) {
        if ((*this)[r] * 2 > sum) return r;
    }
    return std::nullopt;
}

RelationGraph RelationGraph::build(
    std::span<const ClassifiedRelation> relations,
    std::shared_ptr<const EntityRegistry> registry) {
    std::map<std::vector<std::string>, RelationEntry> table;
    for (const ClassifiedRelation& rel : relations) {
        try {
            (void)RelationChain::from_ids(*registry, rel.chain.ids());
        } catch (const Error& e) {
            throw Error(ErrorCode::UnknownChain,
                        std::string("relation chain fails registry "
                                    "validation: ") +
                            e.what());
        }
        std::vector<std::string> labels = chain_labels(*registry, rel.chain);
        RelationEntry& entry = table[labels];
        if (entry.labels.empty()) {
            entry.chain = rel.chain;
            entry.labels = labels;
        }
        entry.counts[rel.result] += 1;
        entry.provenance.push_back({rel.run_id, rel.frame_id, rel.result});
    }

    RelationGraph g;
    g.registry_ = std::move(registry);
    g.entries_.reserve(table.size());
    for (auto& [labels, entry] : table) {
        std::sort(entry.provenance.begin(), entry.provenance.end());
        g.entries_.push_back(std::move(entry));
    }
    return g;
}

std::uint64_t RelationGraph::total_relations() const {
    std::uint64_t sum = 0;
    for (const RelationEntry& e : entries_) sum += e.counts.total();
    return sum;
}

const RelationEntry* RelationGraph::find(const RelationChain& chain) const {
    std::vector<std::string> labels = chain_labels(*registry_, chain);
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), labels,
        [](const RelationEntry& e, const std::vector<std::string>& key) {
            return e.labels < key;
        });
    if (it == entries_.end() || it->labels != labels) return nullptr;
    return &*it;
}

RelationGraph merge(const RelationGraph& a, const RelationGraph& b) {
    if (!(*a.registry_ == *b.registry_)) {
        throw Error(ErrorCode::RegistryMismatch,
                    "cannot merge graphs built against different registries");
    }

    RelationGraph out;
    out.registry_ = a.registry_;
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() || ib != b.entries_.end()) {
        bool take_a = ib == b.entries_.end() ||
                      (ia != a.entries_.end() && ia->labels < ib->labels);
        bool take_b = ia == a.entries_.end() ||
                      (ib != b.entries_.end() && ib->labels < ia->labels);
        if (take_a) {
            out.entries_.push_back(*ia++);
        } else if (take_b) {
            out.entries_.push_back(*ib++);
        } else {
            RelationEntry entry = *ia++;
            const RelationEntry& other = *ib++;
            for (ResultClass r : kAllResultClasses) {
                entry.counts[r] += other.counts[r];
            }
            entry.provenance.insert(entry.provenance.end(),
                                    other.provenance.begin(),
                                    other.provenance.end());
            std::sort(entry.provenance.begin(), entry.provenance.end());
            out.entries_.push_back(std::move(entry));
        }
    }
    return out;
}

std::vector<AmbivalenceSet> find_ambivalences(const RelationGraph& g,
                                              std::uint64_t min_support) {
    std::vector<AmbivalenceSet> out;
    for (int k = order_value(GranularityOrder::Domain);
         k >= order_value(GranularityOrder::Module); --k) {
        GranularityOrder order = order_from_value(k);

        // Chains identical everywhere except at position k, same depth.
        std::map<std::pair<std::size_t, std::vector<std::string>>,
                 std::vector<const RelationEntry*>>
            groups;
        for (const RelationEntry& entry : g.entries()) {
            auto pos = entry.chain.index_of_order(order);
            if (!pos) continue;
            std::vector<std::string> masked = entry.labels;
            masked[*pos].clear();
            groups[{entry.labels.size(), std::move(masked)}].push_back(&entry);
        }

        for (const auto& [key, group] : groups) {
            if (group.size() < 2) continue;
            std::vector<AmbivalenceMember> members;
            for (const RelationEntry* entry : group) {
                auto dom = entry->counts.dominant();
                if (!dom || entry->counts.total() < min_support) continue;
                members.push_back({entry->chain, entry->labels, *dom,
                                   entry->counts.total()});
            }
            std::set<ResultClass> distinct;
            for (const AmbivalenceMember& m : members) {
                distinct.insert(m.dominant);
            }
            if (members.size() < 2 || distinct.size() < 2) continue;

            AmbivalenceSet set;
            set.divergence_order = order;
            std::size_t pos = *members.front().chain.index_of_order(order);
            set.shared_suffix.assign(members.front().labels.begin() + pos + 1,
                                     members.front().labels.end());
            set.members = std::move(members);
            out.push_back(std::move(set));
        }
    }
    return out;
}

std::vector<const RelationEntry*> query(const RelationGraph& g,
                                        const QueryFilter& filter) {
    std::vector<const RelationEntry*> out;
    for (const RelationEntry& entry : g.entries()) {
        if (filter.entity &&
            std::find(entry.chain.ids().begin(), entry.chain.ids().end(),
                      *filter.entity) == entry.chain.ids().end()) {
            continue;
        }
        if (filter.result && entry.counts[*filter.result] == 0) continue;
        if (filter.terminal_order &&
            entry.chain.terminal_order() != *filter.terminal_order) {
            continue;
        }
        out.push_back(&entry);
    }
    return out;
}

}  // namespace eerg
