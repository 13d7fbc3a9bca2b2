#pragma once

// Per-frame matching of predictions to ground truth under the
// tolerable-deviation (IoU) criterion, and result-class assignment:
//   R0 recognized, R1 misclassified, R2 unrecognized, R3 phantom.

#include "eerg/campaign.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eerg {

enum class ResultClass { R0 = 0, R1 = 1, R2 = 2, R3 = 3 };

inline constexpr std::array<ResultClass, 4> kAllResultClasses = {
    ResultClass::R0, ResultClass::R1, ResultClass::R2, ResultClass::R3};

const char* result_class_name(ResultClass r);
ResultClass result_class_from_name(std::string_view name);  // throws ParseError

struct MatchConfig {
    // Minimum IoU for a tolerable deviation, in (0, 1].
    double iou_threshold = 0.5;
    // Optional label -> canonical-label map applied before comparison.
    std::map<std::string, std::string> class_equivalences;
};

// One classified subject. R0/R1 outcomes have a ground-truth subject and
// a prediction counterpart; R2 subjects are unmatched ground truth; R3
// subjects are unmatched predictions.
struct Outcome {
    bool subject_is_prediction = false;
    std::string subject_id;
    std::optional<std::string> matched_counterpart;
    // Matched-pair IoU for R0/R1; best sub-threshold overlap otherwise.
    double iou = 0.0;
    ResultClass result = ResultClass::R0;
};

struct FrameClassification {
    std::string frame_id;
    std::vector<Outcome> outcomes;
};

// area(a intersect b) / area(a union b) for well-formed boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

// Greedy one-to-one assignment by descending IoU over pairs at or above
// the threshold; ties broken by lower gt_id, then lower pred_id.
// Ground-truth outcomes are listed sorted by gt_id, then prediction
// outcomes sorted by pred_id.
FrameClassification match_frame(const FrameRecord& frame,
                                const MatchConfig& cfg);

// A relation chain stamped with a result class and its provenance.
struct ClassifiedRelation {
    RelationChain chain;
    ResultClass result = ResultClass::R0;
    std::string run_id;
    std::string frame_id;
};

struct ClassifyOptions {
    MatchConfig match;
    // Predictions below this confidence are dropped before matching.
    double min_confidence = 0.0;
    // Keep one relation per (run, chain, result class) instead of one
    // per frame occurrence.
    bool dedupe_per_run = false;
};

// Labels minted for phantom relations carry this mark so they can never
// collide with campaign-declared entities.
inline constexpr const char* kSyntheticMark = "†";  // dagger
inline constexpr const char* kPhantomGroupLabel = "Phantom†";

struct RunClassification {
    std::string run_id;
    std::vector<FrameClassification> frames;
};

struct CampaignClassification {
    // The campaign registry extended with synthetic phantom entities.
    std::shared_ptr<const EntityRegistry> registry;
    std::vector<RunClassification> runs;  // sorted by run_id
    // One relation per outcome: R0/R1/R2 carry the ground-truth chain,
    // R3 carries the frame's ambient prefix extended by a synthetic
    // order-0 entity named after the predicted class.
    std::vector<ClassifiedRelation> relations;
};

// Throws AmbientMissing if a phantom occurs in a frame without an
// ambient prefix. Frames are matched concurrently per run; the result
// order is deterministic (runs by id, frames by timestamp, ground-truth
// subjects before predictions, subjects by id).
CampaignClassification classify_campaign(const Campaign& campaign,
                                         const ClassifyOptions& options = {});

}  // namespace eerg
