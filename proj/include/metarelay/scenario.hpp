#pragma once

#include <map>
#include <string>
#include <vector>

#include "metarelay/transfer.hpp"
#include "metarelay/world.hpp"

namespace metarelay {

struct MvConfig {
    std::string id;
    MvKind kind = MvKind::Decentralized;
    uint64_t common_prefix_k = 0; // chains
    uint64_t block_interval_s = 5;
    uint64_t ack_delay_s = 0; // server logs
    uint64_t node_count = 16;
    std::set<FormatTag> formats;
    bool supports_nft = true;
};

struct ObjectConfig {
    std::string id;
    std::string owner;
    ObjectKind kind = ObjectKind::Asset;
    FormatTag format;
    std::string location;
    std::map<std::string, std::string> properties;
};

struct OwnerConfig {
    std::string id;
    int64_t balance = 100; // starting balance per metaverse
};

struct CustomizerConfig {
    std::string id;
    int64_t fee = 1;
    std::vector<std::pair<FormatTag, FormatTag>> capabilities;
};

struct TransferConfig {
    std::string object;
    std::string owner;
    std::string source;
    std::string target;
};

// Everything one reproducible run needs. Loadable from a JSON file
// (// comments allowed); defaults mirror the reference configuration.
struct ScenarioConfig {
    uint64_t seed = 0;
    uint64_t proof_time_s = 90;
    uint64_t committee_size = 400;
    uint64_t committee_window = 2000;
    MvConfig relay; // chain-backed by construction
    std::vector<MvConfig> metaverses;
    std::vector<OwnerConfig> owners;
    std::vector<CustomizerConfig> customizers;
    std::vector<ObjectConfig> objects;
    std::map<std::string, TransferConfig> transfers; // scenario name -> transfer

    void validate() const; // throws Error naming the first problem
};

// The built-in scenarios: dm2dm, cm2cm, dm2cm, cm2dm over a 400-member
// committee relay. The source chain confirms at inclusion (k = 0); the
// relay and target carry k = 400 and k' = 500 at 5 s blocks.
ScenarioConfig default_config();

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// Builds the world, warms the relay chain through the committee window
// and forms a committee per watchable source.
World build_world(const ScenarioConfig& config);

TransferRequest request_for(const ScenarioConfig& config, const std::string& scenario);

} // namespace metarelay
