#include "metarelay/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace metarelay {

namespace {

using nlohmann::json;

std::vector<ProducerSlot> node_slots(const std::string& mv_id, uint64_t count) {
    if (count == 0) throw Error("metaverse " + mv_id + ": node count must be positive");
    size_t width = 1;
    for (uint64_t v = count - 1; v >= 10; v /= 10) ++width;
    std::vector<ProducerSlot> slots;
    slots.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        std::string num = std::to_string(i);
        num.insert(num.begin(), width - num.size(), '0');
        slots.push_back(ProducerSlot{mv_id + "-n" + num, 1});
    }
    return slots;
}

MvConfig parse_mv(const json& j, bool is_relay) {
    MvConfig mv;
    mv.id = j.at("id").get<std::string>();
    if (is_relay) {
        mv.kind = MvKind::Decentralized;
    } else {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "dm") {
            mv.kind = MvKind::Decentralized;
        } else if (kind == "cm") {
            mv.kind = MvKind::Centralized;
        } else {
            throw Error("metaverse " + mv.id + ": kind must be \"dm\" or \"cm\"");
        }
    }
    if (mv.kind == MvKind::Decentralized) {
        mv.common_prefix_k = j.value("k", uint64_t(0));
        mv.block_interval_s = j.value("interval_s", uint64_t(5));
        mv.node_count = j.value("nodes", uint64_t(16));
    } else {
        mv.ack_delay_s = j.value("ack_delay_s", uint64_t(0));
    }
    if (j.contains("formats")) {
        for (const auto& f : j.at("formats")) mv.formats.insert(f.get<std::string>());
    }
    mv.supports_nft = mv.kind == MvKind::Decentralized ? true : j.value("nft", false);
    return mv;
}

} // namespace

void ScenarioConfig::validate() const {
    if (relay.id.empty()) throw Error("config: relay id must not be empty");
    if (relay.block_interval_s == 0) throw Error("config: relay interval must be positive");
    if (committee_size == 0) throw Error("config: committee size must be positive");
    if (committee_window == 0) throw Error("config: committee window must be positive");

    std::set<std::string> mv_ids{relay.id};
    for (const MvConfig& mv : metaverses) {
        if (mv.id.empty()) throw Error("config: metaverse id must not be empty");
        if (!mv_ids.insert(mv.id).second) throw Error("config: duplicate metaverse id " + mv.id);
        if (mv.formats.empty()) throw Error("config: metaverse " + mv.id + " lists no formats");
        if (mv.kind == MvKind::Decentralized && mv.block_interval_s == 0) {
            throw Error("config: metaverse " + mv.id + " needs a positive block interval");
        }
    }

    std::set<std::string> owner_ids;
    for (const OwnerConfig& ow : owners) {
        if (!owner_ids.insert(ow.id).second) throw Error("config: duplicate owner id " + ow.id);
    }

    std::set<std::string> object_ids;
    for (const ObjectConfig& obj : objects) {
        if (!object_ids.insert(obj.id).second) throw Error("config: duplicate object id " + obj.id);
        if (!owner_ids.count(obj.owner)) {
            throw Error("config: object " + obj.id + " names unknown owner " + obj.owner);
        }
        const auto home = std::find_if(metaverses.begin(), metaverses.end(),
                                       [&](const MvConfig& mv) { return mv.id == obj.location; });
        if (home == metaverses.end()) {
            throw Error("config: object " + obj.id + " placed in unknown metaverse " + obj.location);
        }
        if (!home->formats.count(obj.format)) {
            throw Error("config: object " + obj.id + " has format " + obj.format + " but " +
                        obj.location + " does not support it");
        }
    }

    for (const auto& [name, transfer] : transfers) {
        if (!object_ids.count(transfer.object)) {
            throw Error("config: transfer " + name + " names unknown object " + transfer.object);
        }
        if (!owner_ids.count(transfer.owner)) {
            throw Error("config: transfer " + name + " names unknown owner " + transfer.owner);
        }
        if (!mv_ids.count(transfer.source) || transfer.source == relay.id) {
            throw Error("config: transfer " + name + " has invalid source " + transfer.source);
        }
        if (!mv_ids.count(transfer.target) || transfer.target == relay.id) {
            throw Error("config: transfer " + name + " has invalid target " + transfer.target);
        }
        if (transfer.source == transfer.target) {
            throw Error("config: transfer " + name + " must cross metaverses");
        }
    }
}

ScenarioConfig default_config() {
    ScenarioConfig config;
    config.seed = 0;
    config.proof_time_s = 90;
    config.committee_size = 400;
    config.committee_window = 2000;

    config.relay = MvConfig{"relay", MvKind::Decentralized, 400, 5, 0, 600, {"2d", "3d"}, true};

    config.metaverses = {
        // The transfer clock starts at the source lock; the reference
        // latency model carries no source term, so the default source
        // chains confirm at inclusion.
        MvConfig{"dm-a", MvKind::Decentralized, 0, 5, 0, 16, {"2d", "3d"}, true},
        MvConfig{"dm-b", MvKind::Decentralized, 500, 5, 0, 16, {"2d", "3d"}, true},
        MvConfig{"cm-a", MvKind::Centralized, 0, 5, 0, 1, {"3d"}, false},
        MvConfig{"cm-b", MvKind::Centralized, 0, 5, 0, 1, {"3d"}, false},
    };

    config.owners = {OwnerConfig{"alice", 100}};
    config.customizers = {CustomizerConfig{"caster-1", 1, {{"2d", "3d"}, {"3d", "2d"}}}};
    config.objects = {
        ObjectConfig{"axe-1", "alice", ObjectKind::Asset, "2d", "dm-a", {{"use", "cut-trees"}}},
        ObjectConfig{"avatar-1", "alice", ObjectKind::Avatar, "3d", "cm-a", {}},
    };
    config.transfers = {
        {"dm2dm", TransferConfig{"axe-1", "alice", "dm-a", "dm-b"}},
        {"cm2cm", TransferConfig{"avatar-1", "alice", "cm-a", "cm-b"}},
        {"dm2cm", TransferConfig{"axe-1", "alice", "dm-a", "cm-b"}},
        {"cm2dm", TransferConfig{"avatar-1", "alice", "cm-a", "dm-b"}},
    };
    return config;
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }

    try {
        ScenarioConfig config;
        config.seed = j.value("seed", uint64_t(0));
        config.proof_time_s = j.value("proof_time_s", uint64_t(90));
        if (j.contains("committee")) {
            config.committee_size = j.at("committee").value("size", uint64_t(400));
            config.committee_window = j.at("committee").value("window", uint64_t(2000));
        }
        config.relay = parse_mv(j.at("relay"), /*is_relay=*/true);
        config.relay.common_prefix_k = j.at("relay").value("k", uint64_t(400));
        if (config.relay.formats.empty()) config.relay.formats = {"2d", "3d"};

        for (const auto& jm : j.value("metaverses", json::array())) {
            config.metaverses.push_back(parse_mv(jm, false));
        }
        for (const auto& jo : j.value("owners", json::array())) {
            config.owners.push_back(
                OwnerConfig{jo.at("id").get<std::string>(), jo.value("balance", int64_t(100))});
        }
        for (const auto& jc : j.value("customizers", json::array())) {
            CustomizerConfig cust;
            cust.id = jc.at("id").get<std::string>();
            cust.fee = jc.value("fee", int64_t(1));
            for (const auto& cap : jc.value("capabilities", json::array())) {
                cust.capabilities.emplace_back(cap.at(0).get<std::string>(),
                                               cap.at(1).get<std::string>());
            }
            config.customizers.push_back(std::move(cust));
        }
        for (const auto& jo : j.value("objects", json::array())) {
            ObjectConfig obj;
            obj.id = jo.at("id").get<std::string>();
            obj.owner = jo.at("owner").get<std::string>();
            const std::string kind = jo.value("kind", std::string("asset"));
            const auto parsed = object_kind_from_name(kind);
            if (!parsed) throw Error("config: object " + obj.id + " has unknown kind " + kind);
            obj.kind = *parsed;
            obj.format = jo.at("format").get<std::string>();
            obj.location = jo.at("location").get<std::string>();
            // materialize before items(): iterating a temporary dangles
            const json props = jo.value("properties", json::object());
            for (const auto& [k, v] : props.items()) {
                obj.properties[k] = v.get<std::string>();
            }
            config.objects.push_back(std::move(obj));
        }
        const json transfers = j.value("transfers", json::object());
        for (const auto& [name, jt] : transfers.items()) {
            config.transfers[name] = TransferConfig{
                jt.at("object").get<std::string>(), jt.at("owner").get<std::string>(),
                jt.at("source").get<std::string>(), jt.at("target").get<std::string>()};
        }
        config.validate();
        return config;
    } catch (const json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

World build_world(const ScenarioConfig& config) {
    config.validate();
    World world(config.seed);
    world.params.block_interval_s = config.relay.block_interval_s;
    world.params.relay_k = config.relay.common_prefix_k;
    world.params.committee_size = config.committee_size;
    world.params.committee_window = config.committee_window;
    world.params.proof_time_s = config.proof_time_s;
    world.params.validate();
    world.relay_id = config.relay.id;

    // The relay accepts every format in play.
    std::set<FormatTag> relay_formats = config.relay.formats;
    for (const MvConfig& mv : config.metaverses) {
        relay_formats.insert(mv.formats.begin(), mv.formats.end());
    }
    world.add_metaverse(Metaverse(
        config.relay.id,
        SimLedger(config.relay.id, config.relay.block_interval_s, config.relay.common_prefix_k,
                  node_slots(config.relay.id, config.relay.node_count), config.seed),
        relay_formats));

    for (const MvConfig& mv : config.metaverses) {
        if (mv.kind == MvKind::Decentralized) {
            world.add_metaverse(Metaverse(
                mv.id,
                SimLedger(mv.id, mv.block_interval_s, mv.common_prefix_k,
                          node_slots(mv.id, mv.node_count), config.seed),
                mv.formats));
        } else {
            world.add_metaverse(
                Metaverse(mv.id, ServerLog(mv.id, mv.ack_delay_s), mv.formats, mv.supports_nft));
        }
    }

    for (const OwnerConfig& ow : config.owners) {
        Owner owner;
        owner.owner_id = ow.id;
        owner.addresses[config.relay.id] = ow.id + "@" + config.relay.id;
        owner.balances[config.relay.id] = ow.balance;
        for (const MvConfig& mv : config.metaverses) {
            owner.addresses[mv.id] = ow.id + "@" + mv.id;
            owner.balances[mv.id] = ow.balance;
        }
        world.add_owner(std::move(owner));
    }

    for (const CustomizerConfig& cc : config.customizers) {
        Customizer cust;
        cust.cust_id = cc.id;
        cust.fee = cc.fee;
        cust.capabilities.insert(cc.capabilities.begin(), cc.capabilities.end());
        world.add_customizer(std::move(cust));
    }

    for (const ObjectConfig& oc : config.objects) {
        MetaObject obj;
        obj.obj_id = oc.id;
        obj.owner_id = oc.owner;
        obj.kind = oc.kind;
        obj.format = oc.format;
        obj.location = oc.location;
        obj.lock = LockState::active();
        obj.properties = oc.properties;
        world.add_instance(std::move(obj));
    }

    // Warm the relay chain through the committee window, then bind one
    // committee per attestable source. All committees are drawn from the
    // relay chain's producers by chain quality.
    SimLedger& relay_ledger = world.metaverse(config.relay.id).ledger();
    advance_blocks(relay_ledger, world.clock, config.committee_window);
    world.set_committee(config.relay.id,
                        select_committee(relay_ledger, config.committee_window,
                                         config.committee_size, world.directory(), config.relay.id));
    for (const MvConfig& mv : config.metaverses) {
        world.set_committee(mv.id,
                            select_committee(relay_ledger, config.committee_window,
                                             config.committee_size, world.directory(), mv.id));
    }
    return world;
}

TransferRequest request_for(const ScenarioConfig& config, const std::string& scenario) {
    const auto it = config.transfers.find(scenario);
    if (it == config.transfers.end()) {
        throw Error("config: no transfer named " + scenario);
    }
    return TransferRequest{it->second.object, it->second.owner, it->second.source,
                           it->second.target, config.relay.id};
}

} // namespace metarelay
