#include "eerg/campaign_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace eerg {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": " + what);
}

// Fields must appear in the documented order; optional ones may be
// omitted but never reordered, and unknown fields are rejected.
void check_keys(const ordered_json& obj,
                std::initializer_list<const char*> canonical,
                std::initializer_list<const char*> required,
                std::size_t line, const std::string& context) {
    auto canon = canonical.begin();
    for (const auto& item : obj.items()) {
        while (canon != canonical.end() && item.key() != *canon) ++canon;
        if (canon == canonical.end()) {
            parse_fail(line, context + ": unknown or misplaced field '" +
                                 item.key() + "'");
        }
        ++canon;
    }
    for (const char* req : required) {
        if (!obj.contains(req)) {
            parse_fail(line,
                       context + ": missing field '" + std::string(req) + "'");
        }
    }
}

BoundingBox parse_box(const ordered_json& j, std::size_t line,
                      const std::string& context) {
    if (!j.is_array() || j.size() != 4 ||
        !std::all_of(j.begin(), j.end(),
                     [](const ordered_json& v) { return v.is_number(); })) {
        parse_fail(line, context + ": box must be [x_min, y_min, x_max, y_max]");
    }
    return BoundingBox{j[0].get<double>(), j[1].get<double>(),
                       j[2].get<double>(), j[3].get<double>()};
}

std::string get_string(const ordered_json& obj, const char* key,
                       std::size_t line, const std::string& context) {
    const auto& v = obj.at(key);
    if (!v.is_string()) {
        parse_fail(line, context + ": field '" + std::string(key) +
                             "' must be a string");
    }
    return v.get<std::string>();
}

ordered_json box_json(const BoundingBox& b) {
    return ordered_json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

struct RegistryRecord {
    std::string campaign_id;
    std::shared_ptr<EntityRegistry> registry;
};

RegistryRecord parse_campaign_record(const ordered_json& j, std::size_t line) {
    check_keys(j, {"record", "format_version", "campaign_id", "registry"},
               {"record", "format_version", "campaign_id", "registry"}, line,
               "campaign record");
    if (!j.at("format_version").is_number_integer() ||
        j.at("format_version").get<int>() != kCampaignFormatVersion) {
        parse_fail(line, "unsupported format_version");
    }

    RegistryRecord out;
    out.campaign_id = get_string(j, "campaign_id", line, "campaign record");
    out.registry = std::make_shared<EntityRegistry>();

    const ordered_json& reg = j.at("registry");
    check_keys(reg, {"entities", "edges"}, {"entities", "edges"}, line,
               "registry");
    if (!reg.at("entities").is_array() || !reg.at("edges").is_array()) {
        parse_fail(line, "registry entities/edges must be arrays");
    }

    std::vector<EntityId> by_index;
    for (const ordered_json& e : reg.at("entities")) {
        check_keys(e, {"label", "order"}, {"label", "order"}, line, "entity");
        if (!e.at("order").is_number_integer()) {
            parse_fail(line, "entity order must be an integer");
        }
        std::string label = get_string(e, "label", line, "entity");
        GranularityOrder order = order_from_value(e.at("order").get<int>());
        if (out.registry->find(label, order)) {
            parse_fail(line, "duplicate entity '" + label + "' at order " +
                                 std::to_string(order_value(order)));
        }
        by_index.push_back(out.registry->register_entity(label, order));
    }
    for (const ordered_json& edge : reg.at("edges")) {
        if (!edge.is_array() || edge.size() != 2 ||
            !edge[0].is_number_unsigned() || !edge[1].is_number_unsigned()) {
            parse_fail(line, "edge must be [parent_index, child_index]");
        }
        std::size_t pi = edge[0].get<std::size_t>();
        std::size_t ci = edge[1].get<std::size_t>();
        if (pi >= by_index.size() || ci >= by_index.size()) {
            parse_fail(line, "edge index out of range");
        }
        out.registry->add_edge(by_index[pi], by_index[ci]);
    }
    return out;
}

RelationChain parse_chain_field(EntityRegistry& registry,
                                const std::string& text, ChainParseMode mode,
                                std::size_t line) {
    try {
        return parse_chain(registry, text, mode);
    } catch (const Error& e) {
        parse_fail(line, e.what());
    }
}

FrameRecord parse_frame_record(const ordered_json& j, EntityRegistry& registry,
                               ChainParseMode mode, std::size_t line,
                               std::string& run_id_out) {
    check_keys(j,
               {"record", "run_id", "frame_id", "timestamp", "ambient",
                "ground_truth", "predictions"},
               {"record", "run_id", "frame_id", "timestamp", "ground_truth",
                "predictions"},
               line, "frame record");
    run_id_out = get_string(j, "run_id", line, "frame record");

    FrameRecord frame;
    frame.frame_id = get_string(j, "frame_id", line, "frame record");
    if (!j.at("timestamp").is_number_integer()) {
        parse_fail(line, "timestamp must be an integer (microseconds)");
    }
    frame.timestamp_us = j.at("timestamp").get<std::int64_t>();
    if (j.contains("ambient")) {
        frame.ambient = parse_chain_field(
            registry, get_string(j, "ambient", line, "frame record"), mode,
            line);
    }
    if (!j.at("ground_truth").is_array() || !j.at("predictions").is_array()) {
        parse_fail(line, "ground_truth/predictions must be arrays");
    }
    for (const ordered_json& g : j.at("ground_truth")) {
        check_keys(g, {"gt_id", "chain", "box"}, {"gt_id", "chain", "box"},
                   line, "ground-truth object");
        GroundTruthObject gt;
        gt.gt_id = get_string(g, "gt_id", line, "ground-truth object");
        gt.chain = parse_chain_field(
            registry, get_string(g, "chain", line, "ground-truth object"),
            mode, line);
        gt.geometry = parse_box(g.at("box"), line, "ground-truth object");
        frame.ground_truth.push_back(std::move(gt));
    }
    for (const ordered_json& p : j.at("predictions")) {
        check_keys(p, {"pred_id", "class_label", "box", "confidence"},
                   {"pred_id", "class_label", "box", "confidence"}, line,
                   "prediction");
        Prediction pred;
        pred.pred_id = get_string(p, "pred_id", line, "prediction");
        pred.class_label = get_string(p, "class_label", line, "prediction");
        pred.geometry = parse_box(p.at("box"), line, "prediction");
        if (!p.at("confidence").is_number()) {
            parse_fail(line, "confidence must be a number");
        }
        pred.confidence = p.at("confidence").get<double>();
        frame.predictions.push_back(std::move(pred));
    }
    return frame;
}

}  // namespace

Campaign parse_campaign(std::istream& in, ChainParseMode mode) {
    Campaign campaign;
    std::shared_ptr<EntityRegistry> registry;
    std::map<std::string, std::size_t> run_index;

    std::string line_text;
    std::size_t line = 0;
    bool saw_header = false;
    while (std::getline(in, line_text)) {
        ++line;
        if (line_text.empty()) continue;

        ordered_json j = ordered_json::parse(line_text, nullptr, false);
        if (j.is_discarded()) parse_fail(line, "invalid JSON");
        if (!j.is_object() || !j.contains("record") ||
            !j.at("record").is_string()) {
            parse_fail(line, "record must be an object with a 'record' field");
        }
        const std::string kind = j.at("record").get<std::string>();

        if (!saw_header) {
            if (kind != "campaign") {
                parse_fail(line, "first record must be the campaign header");
            }
            RegistryRecord header = parse_campaign_record(j, line);
            campaign.id = header.campaign_id;
            registry = header.registry;
            saw_header = true;
            continue;
        }

        if (kind == "campaign") {
            parse_fail(line, "duplicate campaign header");
        } else if (kind == "run") {
            check_keys(j, {"record", "run_id", "scenario_tag"},
                       {"record", "run_id", "scenario_tag"}, line,
                       "run record");
            Run run;
            run.id = get_string(j, "run_id", line, "run record");
            run.scenario_tag = get_string(j, "scenario_tag", line, "run record");
            if (run_index.count(run.id)) {
                parse_fail(line, "duplicate run record '" + run.id + "'");
            }
            run_index[run.id] = campaign.runs.size();
            campaign.runs.push_back(std::move(run));
        } else if (kind == "frame") {
            std::string run_id;
            FrameRecord frame =
                parse_frame_record(j, *registry, mode, line, run_id);
            auto it = run_index.find(run_id);
            if (it == run_index.end()) {
                parse_fail(line, "frame references undeclared run '" + run_id +
                                     "'");
            }
            campaign.runs[it->second].frames.push_back(std::move(frame));
        } else {
            parse_fail(line, "unknown record kind '" + kind + "'");
        }
    }
    if (!saw_header) {
        throw Error(ErrorCode::ParseError, "empty file: no campaign header");
    }

    registry->freeze();
    campaign.registry = registry;
    finalize_campaign(campaign);
    return campaign;
}

Campaign load_campaign(const std::filesystem::path& path, ChainParseMode mode) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError,
                    "cannot open '" + path.string() + "' for reading");
    }
    return parse_campaign(in, mode);
}

std::string serialize_campaign(const Campaign& campaign) {
    const EntityRegistry& registry = *campaign.registry;

    // Entities sorted by (order descending, label); edges follow the
    // resulting index mapping. This makes the writer canonical.
    std::vector<EntityId> order(registry.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = EntityId{static_cast<std::uint32_t>(i)};
    }
    std::sort(order.begin(), order.end(), [&](EntityId a, EntityId b) {
        const auto& ea = registry.entity(a);
        const auto& eb = registry.entity(b);
        if (ea.order != eb.order) {
            return order_value(ea.order) > order_value(eb.order);
        }
        return ea.label < eb.label;
    });
    std::vector<std::size_t> index_of(registry.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        index_of[order[i].value] = i;
    }

    ordered_json entities = ordered_json::array();
    for (EntityId id : order) {
        const auto& e = registry.entity(id);
        entities.push_back(ordered_json{{"label", e.label},
                                        {"order", order_value(e.order)}});
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& [p, c] : registry.edges()) {
        edges.emplace_back(index_of[p.value], index_of[c.value]);
    }
    std::sort(edges.begin(), edges.end());
    ordered_json edges_json = ordered_json::array();
    for (const auto& [p, c] : edges) {
        edges_json.push_back(ordered_json::array({p, c}));
    }

    std::ostringstream out;
    ordered_json header{{"record", "campaign"},
                        {"format_version", kCampaignFormatVersion},
                        {"campaign_id", campaign.id},
                        {"registry", ordered_json{{"entities", entities},
                                                  {"edges", edges_json}}}};
    out << header.dump() << '\n';

    for (const Run& run : campaign.runs) {
        ordered_json r{{"record", "run"},
                       {"run_id", run.id},
                       {"scenario_tag", run.scenario_tag}};
        out << r.dump() << '\n';
        for (const FrameRecord& frame : run.frames) {
            ordered_json f;
            f["record"] = "frame";
            f["run_id"] = run.id;
            f["frame_id"] = frame.frame_id;
            f["timestamp"] = frame.timestamp_us;
            if (frame.ambient) {
                f["ambient"] = format_chain(registry, *frame.ambient);
            }
            ordered_json gts = ordered_json::array();
            for (const GroundTruthObject& gt : frame.ground_truth) {
                gts.push_back(
                    ordered_json{{"gt_id", gt.gt_id},
                                 {"chain", format_chain(registry, gt.chain)},
                                 {"box", box_json(gt.geometry)}});
            }
            f["ground_truth"] = std::move(gts);
            ordered_json preds = ordered_json::array();
            for (const Prediction& p : frame.predictions) {
                preds.push_back(ordered_json{{"pred_id", p.pred_id},
                                             {"class_label", p.class_label},
                                             {"box", box_json(p.geometry)},
                                             {"confidence", p.confidence}});
            }
            f["predictions"] = std::move(preds);
            out << f.dump() << '\n';
        }
    }
    return out.str();
}

void save_campaign(const Campaign& campaign,
                   const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError,
                    "cannot open '" + path.string() + "' for writing");
    }
    out << serialize_campaign(campaign);
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
    }
}

}  // namespace eerg
