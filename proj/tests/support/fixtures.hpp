#pragma once

// Shared hand-built fixtures for graph and deficit tests.

#include "eerg/matching.hpp"

#include <memory>
#include <vector>

namespace fixtures {

struct RelationFixture {
    std::shared_ptr<const eerg::EntityRegistry> registry;
    std::vector<eerg::ClassifiedRelation> relations;
};

// Scooter recognized in Downtown but misclassified in Parc: one chain
// pair diverging at the scene order.
inline RelationFixture scooter_scenes() {
    auto registry = std::make_shared<eerg::EntityRegistry>();
    eerg::RelationChain downtown = eerg::parse_chain(
        *registry, "City-Downtown-Vehicle-Scooter",
        eerg::ChainParseMode::Permissive);
    eerg::RelationChain parc =
        eerg::parse_chain(*registry, "City-Parc-Vehicle-Scooter",
                          eerg::ChainParseMode::Permissive);
    registry->freeze();

    RelationFixture f;
    f.registry = registry;
    f.relations = {
        {downtown, eerg::ResultClass::R0, "run-0", "f000"},
        {parc, eerg::ResultClass::R1, "run-0", "f001"},
    };
    return f;
}

// Bidirectional drive lane misclassified downtown and unrecognized in
// the rural scene: two distinct failure classes diverging at the scene.
inline RelationFixture drive_lane_scenes() {
    auto registry = std::make_shared<eerg::EntityRegistry>();
    eerg::RelationChain downtown = eerg::parse_chain(
        *registry, "City-Downtown-Ground-BidirectionalLane",
        eerg::ChainParseMode::Permissive);
    eerg::RelationChain rural = eerg::parse_chain(
        *registry, "City-Rural-Ground-BidirectionalLane",
        eerg::ChainParseMode::Permissive);
    registry->freeze();

    RelationFixture f;
    f.registry = registry;
    f.relations = {
        {downtown, eerg::ResultClass::R1, "run-0", "f000"},
        {downtown, eerg::ResultClass::R1, "run-0", "f001"},
        {rural, eerg::ResultClass::R2, "run-1", "f000"},
        {rural, eerg::ResultClass::R2, "run-1", "f001"},
    };
    return f;
}

inline eerg::FrameRecord simple_frame(
    std::vector<eerg::GroundTruthObject> gts,
    std::vector<eerg::Prediction> preds) {
    eerg::FrameRecord frame;
    frame.frame_id = "f000";
    frame.timestamp_us = 0;
    frame.ground_truth = std::move(gts);
    frame.predictions = std::move(preds);
    return frame;
}

}  // namespace fixtures
