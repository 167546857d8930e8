#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rlbrush/agents.hpp"

namespace rlbrush {

using json = nlohmann::ordered_json;

namespace {

json config_to_json(const TrainConfig& c) {
    return json{
        {"kind", to_string(c.kind)},
        {"episodes", c.episodes},
        {"learningRate", c.learningRate},
        {"discount", c.discount},
        {"epsilonStart", c.epsilonStart},
        {"epsilonEnd", c.epsilonEnd},
        {"seed", c.seed},
        {"gridWidth", c.gridWidth},
        {"gridHeight", c.gridHeight},
        {"windowRadius", c.windowRadius},
        {"rewardWeights",
         {{"wPlayer", c.rewardWeights.wPlayer},
          {"wBalance", c.rewardWeights.wBalance},
          {"wRegion", c.rewardWeights.wRegion},
          {"wSolution", c.rewardWeights.wSolution},
          {"targetLength", c.rewardWeights.targetLength}}},
    };
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    auto kind = agent_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw FormatError("unknown agent kind in train config");
    c.kind = *kind;
    c.episodes = j.at("episodes").get<long>();
    c.learningRate = j.at("learningRate").get<double>();
    c.discount = j.at("discount").get<double>();
    c.epsilonStart = j.at("epsilonStart").get<double>();
    c.epsilonEnd = j.at("epsilonEnd").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.gridWidth = j.at("gridWidth").get<int>();
    c.gridHeight = j.at("gridHeight").get<int>();
    c.windowRadius = j.at("windowRadius").get<int>();
    const auto& rw = j.at("rewardWeights");
    c.rewardWeights.wPlayer = rw.at("wPlayer").get<double>();
    c.rewardWeights.wBalance = rw.at("wBalance").get<double>();
    c.rewardWeights.wRegion = rw.at("wRegion").get<double>();
    c.rewardWeights.wSolution = rw.at("wSolution").get<double>();
    c.rewardWeights.targetLength = rw.at("targetLength").get<int>();
    return c;
}

} // namespace

std::string policy_to_json(const Policy& p) {
    json doc;
    doc["formatVersion"] = kPolicyFormatVersion;
    doc["kind"] = to_string(p.kind);
    doc["windowRadius"] = p.windowRadius;
    doc["featureSpec"] = {
        {"encoding", p.featureSpec.encoding},
        {"version", p.featureSpec.version},
        {"channels", p.featureSpec.channels},
        {"gridWidth", p.featureSpec.gridWidth},
        {"gridHeight", p.featureSpec.gridHeight},
        {"features", p.q.features()},
        {"actions", p.q.actions()},
        {"layout", "feature-major"},
    };
    json weights = json::array();
    for (double w : p.q.weights()) weights.push_back(w);
    doc["weights"] = std::move(weights);
    doc["trainedEpisodes"] = p.trainedEpisodes;
    doc["trainConfigEcho"] = p.trainConfig ? config_to_json(*p.trainConfig) : json(nullptr);
    return doc.dump(2) + "\n";
}

Policy policy_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("policy file is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("formatVersion"))
            throw FormatError("policy file has no formatVersion");
        const int version = doc.at("formatVersion").get<int>();
        if (version != kPolicyFormatVersion)
            throw VersionError("unsupported policy format version " + std::to_string(version));

        auto kind = agent_kind_from_string(doc.at("kind").get<std::string>());
        if (!kind) throw FormatError("unknown agent kind");
        const int radius = doc.at("windowRadius").get<int>();
        const auto& fs = doc.at("featureSpec");
        if (fs.at("encoding").get<std::string>() != "onehot-window" ||
            fs.at("version").get<int>() != kFeatureSpecVersion)
            throw VersionError("unsupported feature encoding");

        Policy p = make_policy(*kind, fs.at("gridWidth").get<int>(), fs.at("gridHeight").get<int>(), radius);
        const auto& weights = doc.at("weights");
        if (!weights.is_array() || weights.size() != p.q.weights().size())
            throw FormatError("weight vector length does not match the feature spec");
        auto dst = p.q.weights();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = weights[i].get<double>();
        p.trainedEpisodes = doc.at("trainedEpisodes").get<long>();
        if (const auto& echo = doc.at("trainConfigEcho"); !echo.is_null())
            p.trainConfig = config_from_json(echo);
        return p;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed policy file: ") + e.what());
    }
}

void save_policy(const Policy& p, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out << policy_to_json(p);
    if (!out) throw FormatError("failed writing " + path.string());
}

Policy load_policy(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open policy file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return policy_from_json(buf.str());
}

} // namespace rlbrush
