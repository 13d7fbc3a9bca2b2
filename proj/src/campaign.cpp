#include "eerg/campaign.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace eerg {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ValidationError, where + ": " + what);
}

void check_chain(const EntityRegistry& registry, const RelationChain& chain,
                 const std::string& where) {
    try {
        (void)RelationChain::from_ids(registry, chain.ids());
    } catch (const Error& e) {
        fail(where, std::string("chain fails registry validation: ") +
                        e.what());
    }
}

void check_frame(const EntityRegistry& registry, const Run& run,
                 FrameRecord& frame) {
    const std::string where = "run '" + run.id + "' frame '" + frame.frame_id + "'";
    if (frame.frame_id.empty()) fail("run '" + run.id + "'", "empty frame id");
    if (frame.timestamp_us < 0) fail(where, "negative timestamp");

    if (frame.ambient) {
        check_chain(registry, *frame.ambient, where);
        if (order_value(frame.ambient->terminal_order()) <
            order_value(GranularityOrder::Group)) {
            fail(where, "ambient chain '" +
                            format_chain(registry, *frame.ambient) +
                            "' descends below order +1");
        }
    }

    std::unordered_set<std::string> gt_ids;
    for (GroundTruthObject& gt : frame.ground_truth) {
        if (gt.gt_id.empty()) fail(where, "empty gt_id");
        if (!gt_ids.insert(gt.gt_id).second) {
            fail(where, "duplicate gt_id '" + gt.gt_id + "'");
        }
        check_chain(registry, gt.chain, where);
        auto instance_pos = gt.chain.index_of_order(GranularityOrder::Instance);
        if (!instance_pos) {
            fail(where, "chain '" + format_chain(registry, gt.chain) +
                            "' of gt '" + gt.gt_id + "' lacks instance");
        }
        const std::string& instance_label =
            registry.entity(gt.chain.at(*instance_pos)).label;
        if (gt.class_label.empty()) {
            gt.class_label = instance_label;
        } else if (gt.class_label != instance_label) {
            fail(where, "gt '" + gt.gt_id + "' class label '" + gt.class_label +
                            "' differs from instance '" + instance_label + "'");
        }
        if (!gt.geometry.well_formed()) {
            fail(where, "malformed box on gt '" + gt.gt_id + "'");
        }
    }

    std::unordered_set<std::string> pred_ids;
    for (const Prediction& p : frame.predictions) {
        if (p.pred_id.empty()) fail(where, "empty pred_id");
        if (!pred_ids.insert(p.pred_id).second) {
            fail(where, "duplicate pred_id '" + p.pred_id + "'");
        }
        if (p.class_label.empty()) {
            fail(where, "empty class label on prediction '" + p.pred_id + "'");
        }
        if (!p.geometry.well_formed()) {
            fail(where, "malformed box on prediction '" + p.pred_id + "'");
        }
        if (p.confidence < 0.0 || p.confidence > 1.0) {
            fail(where, "confidence of prediction '" + p.pred_id +
                            "' outside [0, 1]");
        }
    }
}

}  // namespace

void finalize_campaign(Campaign& campaign) {
    if (!campaign.registry) {
        fail("campaign '" + campaign.id + "'", "missing registry");
    }
    if (!campaign.registry->frozen()) {
        fail("campaign '" + campaign.id + "'", "registry not frozen");
    }

    std::set<std::string> run_ids;
    for (Run& run : campaign.runs) {
        if (run.id.empty()) {
            fail("campaign '" + campaign.id + "'", "empty run id");
        }
        if (!run_ids.insert(run.id).second) {
            fail("campaign '" + campaign.id + "'",
                 "duplicate run id '" + run.id + "'");
        }

        // Frames may arrive in any order; ordering is by timestamp.
        std::stable_sort(run.frames.begin(), run.frames.end(),
                         [](const FrameRecord& a, const FrameRecord& b) {
                             return a.timestamp_us < b.timestamp_us;
                         });
        std::unordered_set<std::string> frame_ids;
        for (std::size_t i = 0; i < run.frames.size(); ++i) {
            FrameRecord& frame = run.frames[i];
            if (!frame_ids.insert(frame.frame_id).second) {
                fail("run '" + run.id + "'",
                     "duplicate frame id '" + frame.frame_id + "'");
            }
            if (i > 0 &&
                run.frames[i - 1].timestamp_us >= frame.timestamp_us) {
                fail("run '" + run.id + "' frame '" + frame.frame_id + "'",
                     "timestamp not strictly increasing");
            }
            check_frame(*campaign.registry, run, frame);
        }
    }
}

CampaignStats campaign_stats(const Campaign& campaign) {
    CampaignStats s;
    s.runs = campaign.runs.size();
    for (const Run& run : campaign.runs) {
        s.frames += run.frames.size();
        for (const FrameRecord& frame : run.frames) {
            s.ground_truth += frame.ground_truth.size();
            s.predictions += frame.predictions.size();
        }
    }
    if (campaign.registry) {
        for (std::size_t i = 0; i < kAllOrders.size(); ++i) {
            s.entities_per_order[i] = campaign.registry->count_at(kAllOrders[i]);
        }
    }
    return s;
}

}  // namespace eerg
