#pragma once

// Test-campaign data model: runs of time frames holding granularity-
// annotated ground truth and detector predictions.

#include "eerg/ontology.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eerg {

// Axis-aligned box; units (pixels or metric) are uniform per campaign
// and never interpreted by the toolkit.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool well_formed() const { return x_min < x_max && y_min < y_max; }
    double area() const { return (x_max - x_min) * (y_max - y_min); }
    bool operator==(const BoundingBox&) const = default;
};

struct GroundTruthObject {
    std::string gt_id;
    RelationChain chain;  // must reach order 0 (terminal order <= 0)
    BoundingBox geometry;
    std::string class_label;  // label of the chain's order-0 entity
};

struct Prediction {
    std::string pred_id;
    std::string class_label;
    BoundingBox geometry;
    double confidence = 1.0;
};

struct FrameRecord {
    std::string frame_id;
    std::int64_t timestamp_us = 0;
    // Domain/scene prefix the frame was recorded in; required for frames
    // that produce phantom relations.
    std::optional<RelationChain> ambient;
    std::vector<GroundTruthObject> ground_truth;
    std::vector<Prediction> predictions;
};

struct Run {
    std::string id;
    std::string scenario_tag;
    std::vector<FrameRecord> frames;  // timestamps strictly increasing
};

struct Campaign {
    std::string id;
    std::shared_ptr<const EntityRegistry> registry;
    std::vector<Run> runs;
};

struct CampaignStats {
    std::size_t runs = 0;
    std::size_t frames = 0;
    std::size_t ground_truth = 0;
    std::size_t predictions = 0;
    // Distinct registry entities per order, highest order (+3) first.
    std::array<std::size_t, kOrderCount> entities_per_order{};

    bool operator==(const CampaignStats&) const = default;
};

// Sorts frames by timestamp within each run, derives ground-truth class
// labels from chains, and checks every campaign invariant.
// Throws ValidationError naming the offending run/frame.
void finalize_campaign(Campaign& campaign);

CampaignStats campaign_stats(const Campaign& campaign);

}  // namespace eerg
