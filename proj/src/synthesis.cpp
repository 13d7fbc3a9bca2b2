#include "eerg/synthesis.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace eerg {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kCanvas = 1000.0;
constexpr std::uint32_t kBoxMin = 30;
constexpr std::uint32_t kBoxMax = 80;
constexpr int kRejectionCap = 1000;

[[noreturn]] void spec_fail(const std::string& what) {
    throw Error(ErrorCode::SpecError, what);
}

bool boxes_overlap(const BoundingBox& a, const BoundingBox& b) {
    return a.x_min < b.x_max && b.x_min < a.x_max && a.y_min < b.y_max &&
           b.y_min < a.y_max;
}

struct BuiltRegistry {
    std::shared_ptr<EntityRegistry> registry;
    // Every root-to-leaf path as entity ids, domain first.
    std::vector<std::vector<EntityId>> full_chains;
    std::vector<std::vector<std::string>> full_chain_labels;
    // (domain, scene) pairs, sorted by labels.
    std::vector<std::pair<EntityId, EntityId>> ambient_pairs;
    std::vector<std::string> instance_labels;  // sorted order-0 labels
};

BuiltRegistry build_registry(const SynthSpec& spec) {
    BuiltRegistry out;
    out.registry = std::make_shared<EntityRegistry>();
    EntityRegistry& reg = *out.registry;
    for (const RegistryEntitySpec& e : spec.registry) {
        if (e.parents.empty()) {
            reg.register_entity(e.label, e.order);
            continue;
        }
        for (const std::string& parent : e.parents) {
            auto pid = reg.find(parent, order_from_value(order_value(e.order) + 1));
            if (!pid) {
                spec_fail("entity '" + e.label + "': parent '" + parent +
                          "' not declared before it");
            }
            reg.register_entity(e.label, e.order, *pid);
        }
    }

    // Enumerate all full chains; sampling and triggers both rely on them.
    std::vector<EntityId> path;
    auto walk = [&](auto&& self, EntityId node) -> void {
        path.push_back(node);
        std::vector<EntityId> kids = reg.children(node);
        if (kids.empty()) {
            if (order_value(reg.entity(node).order) >
                order_value(GranularityOrder::Instance)) {
                spec_fail("registry path through '" + reg.entity(node).label +
                          "' dead-ends above the instance order");
            }
            if (out.full_chains.size() >= 10000) {
                spec_fail("registry enumerates more than 10000 chains");
            }
            out.full_chains.push_back(path);
        } else {
            for (EntityId kid : kids) self(self, kid);
        }
        path.pop_back();
    };
    for (EntityId root : reg.at_order(GranularityOrder::Domain)) {
        walk(walk, root);
    }
    if (out.full_chains.empty()) {
        spec_fail("registry declares no domain-rooted chains");
    }
    for (const auto& chain : out.full_chains) {
        std::vector<std::string> labels;
        for (EntityId id : chain) labels.push_back(reg.entity(id).label);
        out.full_chain_labels.push_back(std::move(labels));
    }

    for (EntityId domain : reg.at_order(GranularityOrder::Domain)) {
        for (EntityId scene : reg.children(domain)) {
            out.ambient_pairs.emplace_back(domain, scene);
        }
    }
    std::sort(out.ambient_pairs.begin(), out.ambient_pairs.end(),
              [&](const auto& a, const auto& b) {
                  return std::make_pair(reg.entity(a.first).label,
                                        reg.entity(a.second).label) <
                         std::make_pair(reg.entity(b.first).label,
                                        reg.entity(b.second).label);
              });
    if (out.ambient_pairs.empty()) {
        spec_fail("registry has no domain->scene edge");
    }

    for (EntityId id : reg.at_order(GranularityOrder::Instance)) {
        out.instance_labels.push_back(reg.entity(id).label);
    }
    return out;
}

std::size_t trigger_position(const InjectedDeficit& d) {
    return static_cast<std::size_t>(kOrderMax -
                                    order_value(deficit_locus(d.type)));
}

bool trigger_matches(const InjectedDeficit& d,
                     const std::vector<std::string>& labels) {
    std::size_t pos = trigger_position(d);
    return labels.size() == pos + d.trigger.size() &&
           std::equal(d.trigger.begin(), d.trigger.end(),
                      labels.begin() + static_cast<std::ptrdiff_t>(pos));
}

struct DeficitPlan {
    const InjectedDeficit* deficit = nullptr;
    std::vector<std::size_t> trigger_chains;  // indexes into full_chains
    std::vector<std::size_t> sibling_chains;  // identical except the locus
    bool is_implicit = false;
    std::uint64_t corrupted = 0;
};

std::vector<DeficitPlan> plan_injections(const SynthSpec& spec,
                                         const BuiltRegistry& built) {
    std::vector<DeficitPlan> plans;
    for (const InjectedDeficit& d : spec.injected) {
        if (!(d.rate > 0.0 && d.rate <= 1.0)) {
            spec_fail("injection rate outside (0, 1]");
        }
        if (d.failure_class == ResultClass::R0) {
            spec_fail("failure_class must be R1, R2 or R3");
        }
        if (d.trigger.empty()) spec_fail("empty trigger");

        DeficitPlan plan;
        plan.deficit = &d;
        GranularityOrder locus = deficit_locus(d.type);
        std::size_t pos = trigger_position(d);
        for (std::size_t i = 0; i < built.full_chain_labels.size(); ++i) {
            if (trigger_matches(d, built.full_chain_labels[i])) {
                plan.trigger_chains.push_back(i);
            }
        }
        if (plan.trigger_chains.empty()) {
            spec_fail("trigger '" + d.trigger.front() +
                      "...' matches no registry chain");
        }

        if (d.failure_class == ResultClass::R3) {
            bool has_elements =
                built.registry->count_at(GranularityOrder::Element) > 0;
            if (d.type == DeficitType::FaultyPatternAssociation) {
                if (locus != GranularityOrder::Element) {
                    spec_fail("R3 pattern-association trigger must sit at "
                              "order -3");
                }
            } else if (d.type ==
                       DeficitType::IncompleteObjectRepresentation) {
                if (has_elements) {
                    spec_fail("R3 instance-representation injection needs a "
                              "registry without order -3 entities");
                }
            } else {
                spec_fail("R3 injections support FaultyPatternAssociation or "
                          "IncompleteObjectRepresentation only");
            }
            plan.is_implicit = false;
        } else if (order_value(locus) >=
                   order_value(GranularityOrder::Module)) {
            plan.is_implicit = true;
            // An ambivalence needs a sibling chain that stays correct.
            const auto& trig = built.full_chain_labels[plan.trigger_chains[0]];
            for (std::size_t i = 0; i < built.full_chain_labels.size(); ++i) {
                const auto& other = built.full_chain_labels[i];
                if (other.size() != trig.size()) continue;
                bool sibling = other[pos] != trig[pos];
                for (std::size_t j = 0; sibling && j < other.size(); ++j) {
                    if (j != pos && other[j] != trig[j]) sibling = false;
                }
                if (sibling && !trigger_matches(d, other)) {
                    plan.sibling_chains.push_back(i);
                }
            }
            if (plan.sibling_chains.empty()) {
                spec_fail("no sibling chain differing only at the locus; the "
                          "injected ambivalence would be unobservable");
            }
        } else {
            plan.is_implicit = false;
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

// Deterministic default for class swaps: first instance label that
// differs from the ground-truth class.
std::string default_misclass(const BuiltRegistry& built,
                             const std::string& gt_class) {
    for (const std::string& label : built.instance_labels) {
        if (label != gt_class) return label;
    }
    return "Unlabeled";
}

BoundingBox sample_box(SynthRng& rng, const std::vector<BoundingBox>& taken) {
    for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        double w = kBoxMin + rng.below(kBoxMax - kBoxMin + 1);
        double h = kBoxMin + rng.below(kBoxMax - kBoxMin + 1);
        // Keep 3 units of margin so prediction jitter stays on canvas.
        double x = rng.below(static_cast<std::uint32_t>(kCanvas - w) - 2);
        double y = rng.below(static_cast<std::uint32_t>(kCanvas - h) - 2);
        BoundingBox box{x, y, x + w, y + h};
        bool overlaps = std::any_of(
            taken.begin(), taken.end(), [&](const BoundingBox& other) {
                return boxes_overlap(box, other);
            });
        if (!overlaps) return box;
    }
    spec_fail("box rejection sampling exhausted 1000 attempts");
}

}  // namespace

SynthResult generate(const SynthSpec& spec) {
    if (spec.runs == 0 || spec.frames_per_run == 0) {
        spec_fail("runs and frames_per_run must be positive");
    }
    if (spec.objects_per_frame_min == 0 ||
        spec.objects_per_frame_min > spec.objects_per_frame_max) {
        spec_fail("objects_per_frame range must satisfy 1 <= min <= max");
    }

    BuiltRegistry built = build_registry(spec);
    std::vector<DeficitPlan> plans = plan_injections(spec, built);
    EntityRegistry& reg = *built.registry;

    // Chains the campaign must contain so every injected deficit is
    // observable: the first trigger chain, plus (for implicit
    // injections) its first sibling.
    struct Requirement {
        std::size_t chain_index;
        bool satisfied = false;
    };
    std::vector<Requirement> requirements;
    for (const DeficitPlan& plan : plans) {
        requirements.push_back({plan.trigger_chains.front(), false});
        if (plan.is_implicit) {
            requirements.push_back({plan.sibling_chains.front(), false});
        }
    }

    // Chains samplable under a frame ambient, keyed by (domain, scene).
    std::map<std::pair<EntityId, EntityId>, std::vector<std::size_t>>
        chains_by_ambient;
    for (std::size_t i = 0; i < built.full_chains.size(); ++i) {
        chains_by_ambient[{built.full_chains[i][0], built.full_chains[i][1]}]
            .push_back(i);
    }

    SynthRng rng(spec.seed);
    Campaign campaign;
    campaign.id = spec.campaign_id;

    for (std::size_t r = 0; r < spec.runs; ++r) {
        Run run;
        run.id = "run-" + std::to_string(r);
        run.scenario_tag = "synthetic";
        for (std::size_t f = 0; f < spec.frames_per_run; ++f) {
            const auto& [domain, scene] =
                built.ambient_pairs[f % built.ambient_pairs.size()];

            FrameRecord frame;
            char frame_id[16];
            std::snprintf(frame_id, sizeof frame_id, "f%04zu", f);
            frame.frame_id = frame_id;
            frame.timestamp_us = static_cast<std::int64_t>(f) * 100000;
            frame.ambient = RelationChain::from_ids(reg, {domain, scene});

            const auto& ambient_chains = chains_by_ambient.at({domain, scene});
            std::size_t span = spec.objects_per_frame_max -
                               spec.objects_per_frame_min + 1;
            std::size_t count = spec.objects_per_frame_min +
                                rng.below(static_cast<std::uint32_t>(span));
            std::vector<std::size_t> chosen;
            for (std::size_t i = 0; i < count; ++i) {
                chosen.push_back(ambient_chains[rng.below(
                    static_cast<std::uint32_t>(ambient_chains.size()))]);
            }
            // Pin required chains to the first frames whose ambient
            // admits them.
            std::size_t slot = 0;
            for (Requirement& req : requirements) {
                if (req.satisfied || slot >= chosen.size()) continue;
                if (built.full_chains[req.chain_index][0] == domain &&
                    built.full_chains[req.chain_index][1] == scene) {
                    chosen[slot++] = req.chain_index;
                    req.satisfied = true;
                }
            }

            std::vector<BoundingBox> taken;
            for (std::size_t i = 0; i < chosen.size(); ++i) {
                const auto& path = built.full_chains[chosen[i]];
                GroundTruthObject gt;
                gt.gt_id = "g" + std::to_string(i);
                gt.chain = RelationChain::from_ids(reg, path);
                gt.geometry = sample_box(rng, taken);
                taken.push_back(gt.geometry);
                frame.ground_truth.push_back(std::move(gt));
            }

            // Perfect detector first, then the injected perturbations.
            std::size_t pred_seq = 0;
            std::vector<Prediction> phantoms;
            for (std::size_t i = 0; i < frame.ground_truth.size(); ++i) {
                const GroundTruthObject& gt = frame.ground_truth[i];
                const auto& labels = built.full_chain_labels[chosen[i]];
                std::string gt_class =
                    labels[static_cast<std::size_t>(kOrderMax)];

                Prediction pred;
                pred.pred_id = "p" + std::to_string(pred_seq++);
                pred.class_label = gt_class;
                // Localization jitter of up to 3 units keeps the IoU
                // at 0.68 or better for the smallest boxes.
                double dx = rng.below(4);
                double dy = rng.below(4);
                pred.geometry = {gt.geometry.x_min + dx, gt.geometry.y_min + dy,
                                 gt.geometry.x_max + dx, gt.geometry.y_max + dy};
                pred.confidence = (60 + rng.below(41)) / 100.0;

                bool drop = false;
                for (DeficitPlan& plan : plans) {
                    const InjectedDeficit& d = *plan.deficit;
                    if (!trigger_matches(d, labels)) continue;
                    if (d.rate < 1.0 && rng.unit() >= d.rate) continue;
                    plan.corrupted += 1;
                    switch (d.failure_class) {
                        case ResultClass::R1:
                            pred.class_label =
                                d.misclass_label.empty()
                                    ? default_misclass(built, gt_class)
                                    : d.misclass_label;
                            break;
                        case ResultClass::R2:
                            drop = true;
                            break;
                        case ResultClass::R3: {
                            Prediction phantom;
                            phantom.class_label =
                                d.misclass_label.empty()
                                    ? default_misclass(built, gt_class)
                                    : d.misclass_label;
                            phantom.geometry = sample_box(rng, taken);
                            phantom.confidence = (60 + rng.below(41)) / 100.0;
                            phantoms.push_back(std::move(phantom));
                            break;
                        }
                        default:
                            break;
                    }
                    break;  // one injection per object
                }
                if (!drop) frame.predictions.push_back(std::move(pred));
            }
            for (Prediction& phantom : phantoms) {
                phantom.pred_id = "p" + std::to_string(pred_seq++);
                frame.predictions.push_back(std::move(phantom));
            }
            run.frames.push_back(std::move(frame));
        }
        campaign.runs.push_back(std::move(run));
    }

    for (const Requirement& req : requirements) {
        if (!req.satisfied) {
            spec_fail("required chain never became samplable; not enough "
                      "frames for its scene");
        }
    }

    reg.freeze();
    campaign.registry = built.registry;
    finalize_campaign(campaign);

    SynthResult result;
    result.campaign = std::move(campaign);
    std::map<std::tuple<int, int, int>, ExpectedFinding> merged;
    for (const DeficitPlan& plan : plans) {
        const InjectedDeficit& d = *plan.deficit;
        ExpectedFinding e;
        e.kind = plan.is_implicit ? FindingKind::Implicit : FindingKind::Explicit;
        e.type = d.type;
        // Phantoms surface on the synthetic chain, which ends at the
        // instance order regardless of the trigger depth.
        e.locus = d.failure_class == ResultClass::R3
                      ? GranularityOrder::Instance
                      : deficit_locus(d.type);
        e.support = plan.corrupted;
        auto key = std::make_tuple(static_cast<int>(e.kind),
                                   static_cast<int>(e.type),
                                   order_value(e.locus));
        auto [it, inserted] = merged.emplace(key, e);
        if (!inserted) it->second.support += e.support;
    }
    for (const auto& [key, e] : merged) result.expected.push_back(e);
    return result;
}

SynthSpec demo_spec(DeficitType type, std::uint64_t seed) {
    using O = GranularityOrder;
    SynthSpec spec;
    spec.seed = seed;
    spec.runs = 3;
    spec.frames_per_run = 50;
    spec.objects_per_frame_min = 1;
    spec.objects_per_frame_max = 6;

    auto entity = [&](std::string label, O order,
                      std::vector<std::string> parents = {}) {
        spec.registry.push_back({std::move(label), order, std::move(parents)});
    };
    InjectedDeficit d;
    d.type = type;
    d.rate = 1.0;

    switch (type) {
        case DeficitType::IncompleteDomainKnowledge:
            spec.campaign_id = "demo-domain-knowledge";
            entity("City", O::Domain);
            entity("Forest", O::Domain);
            entity("Meadow", O::Scene, {"City", "Forest"});
            entity("People", O::Group, {"Meadow"});
            entity("Person", O::Instance, {"People"});
            d.trigger = {"Forest", "Meadow", "People", "Person"};
            d.failure_class = ResultClass::R2;
            break;
        case DeficitType::ForegroundBackground:
            spec.campaign_id = "demo-foreground-background";
            entity("City", O::Domain);
            entity("Downtown", O::Scene, {"City"});
            entity("Parc", O::Scene, {"City"});
            entity("Vehicle", O::Group, {"Downtown", "Parc"});
            entity("Scooter", O::Instance, {"Vehicle"});
            d.trigger = {"Parc", "Vehicle", "Scooter"};
            d.failure_class = ResultClass::R1;
            d.misclass_label = "Box";
            break;
        case DeficitType::ForegroundForeground:
            spec.campaign_id = "demo-foreground-foreground";
            entity("City", O::Domain);
            entity("Downtown", O::Scene, {"City"});
            entity("Solo", O::Group, {"Downtown"});
            entity("Crowd", O::Group, {"Downtown"});
            entity("Person", O::Instance, {"Solo", "Crowd"});
            d.trigger = {"Crowd", "Person"};
            d.failure_class = ResultClass::R2;
            break;
        case DeficitType::IncompleteObjectRepresentation:
            spec.campaign_id = "demo-object-representation";
            entity("City", O::Domain);
            entity("Downtown", O::Scene, {"City"});
            entity("People", O::Group, {"Downtown"});
            entity("PersonTall", O::Instance, {"People"});
            entity("PersonShort", O::Instance, {"People"});
            d.trigger = {"PersonShort"};
            d.failure_class = ResultClass::R2;
            break;
        case DeficitType::IncompleteRotaryRepresentation:
            spec.campaign_id = "demo-rotary-representation";
            entity("City", O::Domain);
            entity("Downtown", O::Scene, {"City"});
            entity("People", O::Group, {"Downtown"});
            entity("Person", O::Instance, {"People"});
            entity("Front", O::Module, {"Person"});
            entity("Side", O::Module, {"Person"});
            d.trigger = {"Side"};
            d.failure_class = ResultClass::R2;
            break;
        case DeficitType::MissingAttributeIntegration:
            spec.campaign_id = "demo-attribute-integration";
            entity("City", O::Domain);
            entity("Downtown", O::Scene, {"City"});
            entity("Nature", O::Group, {"Downtown"});
            entity("Vehicle", O::Group, {"Downtown"});
            entity("Tree", O::Instance, {"Nature"});
            entity("Lying", O::Module, {"Tree"});
            entity("Trunk", O::Component, {"Lying"});
            entity("Car", O::Instance, {"Vehicle"});
            d.trigger = {"Trunk"};
            d.failure_class = ResultClass::R2;
            break;
        case DeficitType::FaultyPatternAssociation:
            spec.campaign_id = "demo-pattern-association";
            entity("City", O::Domain);
            entity("Parc", O::Scene, {"City"});
            entity("Static", O::Group, {"Parc"});
            entity("Vehicle", O::Group, {"Parc"});
            entity("House", O::Instance, {"Static"});
            entity("Facade", O::Module, {"House"});
            entity("Wall", O::Component, {"Facade"});
            entity("Commercial", O::Element, {"Wall"});
            entity("Car", O::Instance, {"Vehicle"});
            d.trigger = {"Commercial"};
            d.failure_class = ResultClass::R1;
            d.misclass_label = "Billboard";
            break;
    }
    spec.injected.push_back(std::move(d));
    return spec;
}

SynthSpec baseline_spec(std::uint64_t seed, std::size_t runs,
                        std::size_t frames_per_run,
                        std::size_t objects_per_frame_max) {
    using O = GranularityOrder;
    SynthSpec spec;
    spec.campaign_id = "baseline";
    spec.seed = seed;
    spec.runs = runs;
    spec.frames_per_run = frames_per_run;
    spec.objects_per_frame_min = 1;
    spec.objects_per_frame_max = objects_per_frame_max;
    spec.registry = {
        {"City", O::Domain, {}},
        {"Downtown", O::Scene, {"City"}},
        {"Parc", O::Scene, {"City"}},
        {"Vehicle", O::Group, {"Downtown", "Parc"}},
        {"People", O::Group, {"Downtown", "Parc"}},
        {"Car", O::Instance, {"Vehicle"}},
        {"Scooter", O::Instance, {"Vehicle"}},
        {"Person", O::Instance, {"People"}},
    };
    return spec;
}

Campaign reference_campaign() {
    using O = GranularityOrder;
    auto registry = std::make_shared<EntityRegistry>();
    EntityRegistry& r = *registry;

    EntityId city = r.register_entity("City", O::Domain);
    EntityId downtown = r.register_entity("Downtown", O::Scene, city);
    EntityId rural = r.register_entity("Rural", O::Scene, city);

    EntityId people = r.register_entity("People", O::Group, downtown);
    EntityId props = r.register_entity("Props", O::Group, downtown);
    EntityId vehicle = r.register_entity("Vehicle", O::Group, downtown);
    EntityId ground_dt = r.register_entity("Ground", O::Group, downtown);
    r.add_edge(rural, ground_dt);
    EntityId nature = r.register_entity("Nature", O::Group, rural);

    EntityId person = r.register_entity("Person", O::Instance, people);
    EntityId sign = r.register_entity("ProtestSign", O::Instance, props);
    r.register_entity("Car", O::Instance, vehicle);
    EntityId road = r.register_entity("Road", O::Instance, ground_dt);
    r.register_entity("BidirectionalLane", O::Instance, ground_dt);
    r.register_entity("Tree", O::Instance, nature);

    EntityId person_front = r.register_entity("Front", O::Module, person);
    EntityId torso = r.register_entity("Torso", O::Component, person_front);
    r.register_entity("StopSignPrint", O::Element, torso);

    EntityId sign_front = r.register_entity("Front", O::Module, sign);
    EntityId board = r.register_entity("Board", O::Component, sign_front);
    r.register_entity("SloganText", O::Element, board);

    EntityId road_top = r.register_entity("Top", O::Module, road);
    EntityId asphalt = r.register_entity("Asphalt", O::Component, road_top);
    r.register_entity("ZoneSignMarking", O::Element, asphalt);

    r.freeze();

    auto chain = [&](const char* text) { return parse_chain(r, text); };
    const RelationChain ambient_dt = chain("City-Downtown");
    const RelationChain ambient_rural = chain("City-Rural");

    const BoundingBox person_box{100, 100, 160, 220};
    const BoundingBox sign_box{200, 120, 260, 200};
    const BoundingBox marking_box{300, 500, 420, 560};
    const BoundingBox car_box{500, 300, 620, 380};
    const BoundingBox lane_box{0, 600, 1000, 700};
    // Overlaps the marking at IoU 1/3, below the 0.5 threshold.
    const BoundingBox phantom_box{300, 470, 420, 530};
    const BoundingBox tree_box{50, 50, 150, 250};

    Campaign campaign;
    campaign.id = "reference-showcase";
    campaign.registry = registry;

    Run urban;
    urban.id = "urban";
    urban.scenario_tag = "downtown-crossing";
    {
        FrameRecord f;
        f.frame_id = "f000";
        f.timestamp_us = 0;
        f.ambient = ambient_dt;
        f.ground_truth = {
            {"g0", chain("City-Downtown-People-Person-Front-Torso-StopSignPrint"),
             person_box, ""},
            {"g1", chain("City-Downtown-Props-ProtestSign-Front-Board-SloganText"),
             sign_box, ""},
            {"g2", chain("City-Downtown-Ground-Road-Top-Asphalt-ZoneSignMarking"),
             marking_box, ""},
            {"g3", chain("City-Downtown-Vehicle-Car"), car_box, ""},
            {"g4", chain("City-Downtown-Ground-BidirectionalLane"), lane_box, ""},
        };
        f.predictions = {
            {"p0", "TrafficSign", person_box, 0.91},
            {"p1", "TrafficSign", sign_box, 0.88},
            {"p2", "Car", car_box, 0.97},
            {"p3", "Vegetation", lane_box, 0.74},
            {"p4", "Car", phantom_box, 0.82},
        };
        urban.frames.push_back(std::move(f));
    }
    {
        FrameRecord f;
        f.frame_id = "f001";
        f.timestamp_us = 100000;
        f.ambient = ambient_dt;
        f.ground_truth = {
            {"g0", chain("City-Downtown-Ground-Road-Top-Asphalt-ZoneSignMarking"),
             marking_box, ""},
            {"g1", chain("City-Downtown-Vehicle-Car"), car_box, ""},
            {"g2", chain("City-Downtown-Ground-BidirectionalLane"), lane_box, ""},
        };
        f.predictions = {
            {"p0", "Car", car_box, 0.96},
            {"p1", "Vegetation", lane_box, 0.71},
        };
        urban.frames.push_back(std::move(f));
    }

    Run rural_run;
    rural_run.id = "rural";
    rural_run.scenario_tag = "meadow-road";
    for (int i = 0; i < 2; ++i) {
        FrameRecord f;
        f.frame_id = i == 0 ? "f000" : "f001";
        f.timestamp_us = i * 100000;
        f.ambient = ambient_rural;
        f.ground_truth = {
            {"g0", chain("City-Rural-Ground-BidirectionalLane"), lane_box, ""},
            {"g1", chain("City-Rural-Nature-Tree"), tree_box, ""},
        };
        f.predictions = {
            {"p0", "Tree", tree_box, 0.93},
        };
        rural_run.frames.push_back(std::move(f));
    }

    campaign.runs.push_back(std::move(urban));
    campaign.runs.push_back(std::move(rural_run));
    finalize_campaign(campaign);
    return campaign;
}

SynthSpec parse_synth_spec(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorCode::ParseError, "synth spec is not a JSON object");
    }
    try {
        SynthSpec spec;
        if (j.value("record", "synth_spec") != std::string("synth_spec")) {
            throw Error(ErrorCode::ParseError, "not a synth_spec record");
        }
        spec.campaign_id = j.value("campaign_id", std::string("synthetic"));
        spec.seed = j.value("seed", 0ULL);
        spec.runs = j.value("runs", std::size_t{1});
        spec.frames_per_run = j.value("frames_per_run", std::size_t{1});
        if (j.contains("objects_per_frame")) {
            const auto& range = j.at("objects_per_frame");
            spec.objects_per_frame_min = range.at(0).get<std::size_t>();
            spec.objects_per_frame_max = range.at(1).get<std::size_t>();
        }
        for (const auto& e : j.value("registry", ordered_json::array())) {
            RegistryEntitySpec es;
            es.label = e.at("label").get<std::string>();
            es.order = order_from_value(e.at("order").get<int>());
            for (const auto& p : e.value("parents", ordered_json::array())) {
                es.parents.push_back(p.get<std::string>());
            }
            spec.registry.push_back(std::move(es));
        }
        for (const auto& inj : j.value("injected", ordered_json::array())) {
            InjectedDeficit d;
            d.type = deficit_type_from_name(inj.at("type").get<std::string>());
            for (const auto& t : inj.at("trigger")) {
                d.trigger.push_back(t.get<std::string>());
            }
            d.failure_class = result_class_from_name(
                inj.at("failure_class").get<std::string>());
            d.rate = inj.value("rate", 1.0);
            d.misclass_label = inj.value("misclass_label", std::string());
            spec.injected.push_back(std::move(d));
        }
        return spec;
    } catch (const ordered_json::exception& e) {
        throw Error(ErrorCode::ParseError,
                    std::string("synth spec: ") + e.what());
    }
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError,
                    "cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_synth_spec(buf.str());
}

std::string serialize_synth_spec(const SynthSpec& spec) {
    ordered_json j;
    j["record"] = "synth_spec";
    j["format_version"] = 1;
    j["campaign_id"] = spec.campaign_id;
    j["seed"] = spec.seed;
    j["runs"] = spec.runs;
    j["frames_per_run"] = spec.frames_per_run;
    j["objects_per_frame"] = ordered_json::array(
        {spec.objects_per_frame_min, spec.objects_per_frame_max});
    ordered_json reg = ordered_json::array();
    for (const RegistryEntitySpec& e : spec.registry) {
        ordered_json parents = ordered_json::array();
        for (const std::string& p : e.parents) parents.push_back(p);
        reg.push_back(ordered_json{{"label", e.label},
                                   {"order", order_value(e.order)},
                                   {"parents", parents}});
    }
    j["registry"] = std::move(reg);
    ordered_json injected = ordered_json::array();
    for (const InjectedDeficit& d : spec.injected) {
        ordered_json trigger = ordered_json::array();
        for (const std::string& t : d.trigger) trigger.push_back(t);
        ordered_json dj{{"type", deficit_type_name(d.type)},
                        {"trigger", trigger},
                        {"failure_class", result_class_name(d.failure_class)},
                        {"rate", d.rate}};
        if (!d.misclass_label.empty()) dj["misclass_label"] = d.misclass_label;
        injected.push_back(std::move(dj));
    }
    j["injected"] = std::move(injected);
    return j.dump() + "\n";
}

std::string serialize_manifest(const SynthResult& result,
                               const std::string& campaign_id) {
    CampaignStats stats = campaign_stats(result.campaign);
    std::ostringstream out;
    ordered_json summary{{"record", "synth_summary"},
                         {"format_version", 1},
                         {"campaign_id", campaign_id},
                         {"runs", stats.runs},
                         {"frames", stats.frames},
                         {"ground_truth", stats.ground_truth},
                         {"predictions", stats.predictions}};
    out << summary.dump() << '\n';
    for (const ExpectedFinding& e : result.expected) {
        ordered_json f{{"record", "expected_finding"},
                       {"kind", finding_kind_name(e.kind)},
                       {"type", deficit_type_name(e.type)},
                       {"locus", order_value(e.locus)},
                       {"support", e.support}};
        out << f.dump() << '\n';
    }
    return out.str();
}

ManifestData parse_manifest(const std::string& text) {
    ManifestData data;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("record")) {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) +
                            ": invalid manifest record");
        }
        std::string kind = j.at("record").get<std::string>();
        if (kind == "synth_summary") {
            data.campaign_id = j.at("campaign_id").get<std::string>();
            data.stats.runs = j.at("runs").get<std::size_t>();
            data.stats.frames = j.at("frames").get<std::size_t>();
            data.stats.ground_truth = j.at("ground_truth").get<std::size_t>();
            data.stats.predictions = j.at("predictions").get<std::size_t>();
        } else if (kind == "expected_finding") {
            ExpectedFinding e;
            e.kind = finding_kind_from_name(j.at("kind").get<std::string>());
            e.type = deficit_type_from_name(j.at("type").get<std::string>());
            e.locus = order_from_value(j.at("locus").get<int>());
            e.support = j.at("support").get<std::uint64_t>();
            data.findings.push_back(e);
        } else {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) +
                            ": unknown manifest record '" + kind + "'");
        }
    }
    return data;
}

ManifestData load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError,
                    "cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

}  // namespace eerg
