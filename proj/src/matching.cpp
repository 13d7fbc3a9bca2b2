#include "eerg/matching.hpp"

#include <algorithm>
#include <future>
#include <set>

namespace eerg {

const char* result_class_name(ResultClass r) {
    switch (r) {
        case ResultClass::R0: return "R0";
        case ResultClass::R1: return "R1";
        case ResultClass::R2: return "R2";
        case ResultClass::R3: return "R3";
    }
    return "R?";
}

ResultClass result_class_from_name(std::string_view name) {
    for (ResultClass r : kAllResultClasses) {
        if (name == result_class_name(r)) return r;
    }
    throw Error(ErrorCode::ParseError,
                "unknown result class '" + std::string(name) + "'");
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    double ix_min = std::max(a.x_min, b.x_min);
    double iy_min = std::max(a.y_min, b.y_min);
    double ix_max = std::min(a.x_max, b.x_max);
    double iy_max = std::min(a.y_max, b.y_max);
    double iw = ix_max - ix_min;
    double ih = iy_max - iy_min;
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    double inter = iw * ih;
    return inter / (a.area() + b.area() - inter);
}

namespace {

const std::string& canonical_label(const MatchConfig& cfg,
                                   const std::string& label) {
    auto it = cfg.class_equivalences.find(label);
    return it == cfg.class_equivalences.end() ? label : it->second;
}

struct CandidatePair {
    double iou = 0.0;
    std::size_t gt_index = 0;
    std::size_t pred_index = 0;
};

}  // namespace

FrameClassification match_frame(const FrameRecord& frame,
                                const MatchConfig& cfg) {
    if (!(cfg.iou_threshold > 0.0 && cfg.iou_threshold <= 1.0)) {
        throw Error(ErrorCode::ValidationError,
                    "iou_threshold outside (0, 1]");
    }

    const auto& gts = frame.ground_truth;
    const auto& preds = frame.predictions;

    // All pairwise overlaps; candidates are those at or above threshold.
    std::vector<double> overlap(gts.size() * preds.size(), 0.0);
    std::vector<CandidatePair> candidates;
    for (std::size_t g = 0; g < gts.size(); ++g) {
        for (std::size_t p = 0; p < preds.size(); ++p) {
            double v = iou(gts[g].geometry, preds[p].geometry);
            overlap[g * preds.size() + p] = v;
            if (v >= cfg.iou_threshold) {
                candidates.push_back({v, g, p});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](const CandidatePair& a, const CandidatePair& b) {
                  if (a.iou != b.iou) return a.iou > b.iou;
                  if (gts[a.gt_index].gt_id != gts[b.gt_index].gt_id) {
                      return gts[a.gt_index].gt_id < gts[b.gt_index].gt_id;
                  }
                  return preds[a.pred_index].pred_id <
                         preds[b.pred_index].pred_id;
              });

    std::vector<std::optional<std::size_t>> match_of_gt(gts.size());
    std::vector<bool> pred_taken(preds.size(), false);
    for (const CandidatePair& c : candidates) {
        if (match_of_gt[c.gt_index] || pred_taken[c.pred_index]) continue;
        match_of_gt[c.gt_index] = c.pred_index;
        pred_taken[c.pred_index] = true;
    }

    auto best_overlap = [&](std::size_t fixed, bool fixed_is_gt) {
        double best = 0.0;
        if (fixed_is_gt) {
            for (std::size_t p = 0; p < preds.size(); ++p) {
                best = std::max(best, overlap[fixed * preds.size() + p]);
            }
        } else {
            for (std::size_t g = 0; g < gts.size(); ++g) {
                best = std::max(best, overlap[g * preds.size() + fixed]);
            }
        }
        return best;
    };

    FrameClassification out;
    out.frame_id = frame.frame_id;

    std::vector<std::size_t> gt_order(gts.size());
    for (std::size_t i = 0; i < gt_order.size(); ++i) gt_order[i] = i;
    std::sort(gt_order.begin(), gt_order.end(), [&](std::size_t a, std::size_t b) {
        return gts[a].gt_id < gts[b].gt_id;
    });
    for (std::size_t g : gt_order) {
        Outcome o;
        o.subject_id = gts[g].gt_id;
        if (match_of_gt[g]) {
            const Prediction& p = preds[*match_of_gt[g]];
            o.matched_counterpart = p.pred_id;
            o.iou = overlap[g * preds.size() + *match_of_gt[g]];
            o.result = canonical_label(cfg, gts[g].class_label) ==
                               canonical_label(cfg, p.class_label)
                           ? ResultClass::R0
                           : ResultClass::R1;
        } else {
            o.iou = best_overlap(g, true);
            o.result = ResultClass::R2;
        }
        out.outcomes.push_back(std::move(o));
    }

    std::vector<std::size_t> pred_order(preds.size());
    for (std::size_t i = 0; i < pred_order.size(); ++i) pred_order[i] = i;
    std::sort(pred_order.begin(), pred_order.end(),
              [&](std::size_t a, std::size_t b) {
                  return preds[a].pred_id < preds[b].pred_id;
              });
    for (std::size_t p : pred_order) {
        if (pred_taken[p]) continue;
        Outcome o;
        o.subject_is_prediction = true;
        o.subject_id = preds[p].pred_id;
        o.iou = best_overlap(p, false);
        o.result = ResultClass::R3;
        out.outcomes.push_back(std::move(o));
    }
    return out;
}

namespace {

FrameRecord filtered_frame(const FrameRecord& frame, double min_confidence) {
    if (min_confidence <= 0.0) return frame;
    FrameRecord copy = frame;
    std::erase_if(copy.predictions, [&](const Prediction& p) {
        return p.confidence < min_confidence;
    });
    return copy;
}

// Extends the ambient prefix down to a synthetic order-0 entity named
// after the predicted class.
RelationChain phantom_chain(EntityRegistry& registry,
                            const RelationChain& ambient,
                            const std::string& class_label) {
    std::vector<EntityId> ids = ambient.ids();
    while (order_value(registry.entity(ids.back()).order) >
           order_value(GranularityOrder::Group)) {
        GranularityOrder next = order_from_value(
            order_value(registry.entity(ids.back()).order) - 1);
        ids.push_back(
            registry.register_synthetic(kPhantomGroupLabel, next, ids.back()));
    }
    ids.push_back(registry.register_synthetic(
        class_label + kSyntheticMark, GranularityOrder::Instance, ids.back()));
    return RelationChain::from_ids(registry, std::move(ids));
}

}  // namespace

CampaignClassification classify_campaign(const Campaign& campaign,
                                         const ClassifyOptions& options) {
    // Phase 1: match frames, concurrently per run. Pure per frame.
    std::vector<const Run*> runs;
    for (const Run& run : campaign.runs) runs.push_back(&run);
    std::sort(runs.begin(), runs.end(),
              [](const Run* a, const Run* b) { return a->id < b->id; });

    std::vector<std::future<std::vector<FrameClassification>>> futures;
    for (const Run* run : runs) {
        futures.push_back(std::async(std::launch::async, [run, &options]() {
            std::vector<FrameClassification> frames;
            frames.reserve(run->frames.size());
            for (const FrameRecord& frame : run->frames) {
                frames.push_back(match_frame(
                    filtered_frame(frame, options.min_confidence),
                    options.match));
            }
            return frames;
        }));
    }

    CampaignClassification out;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        out.runs.push_back({runs[i]->id, futures[i].get()});
    }

    // Phase 2: emit relations serially so synthetic registration and
    // output order are independent of scheduling.
    EntityRegistry augmented = campaign.registry->unfrozen_copy();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Run& run = *runs[i];
        for (std::size_t f = 0; f < run.frames.size(); ++f) {
            const FrameRecord& frame = run.frames[f];
            std::map<std::string, const GroundTruthObject*> gt_by_id;
            for (const GroundTruthObject& gt : frame.ground_truth) {
                gt_by_id[gt.gt_id] = &gt;
            }
            for (const Outcome& o : out.runs[i].frames[f].outcomes) {
                ClassifiedRelation rel;
                rel.result = o.result;
                rel.run_id = run.id;
                rel.frame_id = frame.frame_id;
                if (o.result == ResultClass::R3) {
                    if (!frame.ambient) {
                        throw Error(ErrorCode::AmbientMissing,
                                    "run '" + run.id + "' frame '" +
                                        frame.frame_id +
                                        "': phantom prediction '" +
                                        o.subject_id +
                                        "' but no ambient prefix declared");
                    }
                    const Prediction* pred = nullptr;
                    for (const Prediction& p : frame.predictions) {
                        if (p.pred_id == o.subject_id) pred = &p;
                    }
                    rel.chain = phantom_chain(augmented, *frame.ambient,
                                              pred->class_label);
                } else {
                    rel.chain = gt_by_id.at(o.subject_id)->chain;
                }
                out.relations.push_back(std::move(rel));
            }
        }
    }

    if (options.dedupe_per_run) {
        std::set<std::tuple<std::string, std::vector<EntityId>, ResultClass>>
            seen;
        std::erase_if(out.relations, [&](const ClassifiedRelation& r) {
            return !seen
                        .emplace(r.run_id, r.chain.ids(), r.result)
                        .second;
        });
    }

    augmented.freeze();
    out.registry = std::make_shared<const EntityRegistry>(std::move(augmented));
    return out;
}

}  // namespace eerg
