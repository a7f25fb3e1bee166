// SPDX-License-Identifier: Apache-2.0
#include "rnnf/model_io.hpp"

#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rnnf/error.hpp"

namespace rnnf {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json config_to_json(const ModelConfig& c) {
    return json{{"architecture", to_string(c.architecture)},
                {"hidden_units", c.hidden_units},
                {"window_size", c.window_size},
                {"seed", c.seed},
                {"epochs", c.epochs},
                {"validation_fraction", c.validation_fraction},
                {"learning_rate", c.learning_rate},
                {"batch_size", c.batch_size},
                {"shuffle", c.shuffle},
                {"grad_clip_norm", c.grad_clip_norm}};
}

ModelConfig config_from_json(const json& j) {
    ModelConfig c;
    c.architecture = architecture_from_string(j.at("architecture").get<std::string>());
    c.hidden_units = j.at("hidden_units").get<std::vector<std::size_t>>();
    c.window_size = j.at("window_size").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.validation_fraction = j.at("validation_fraction").get<double>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.shuffle = j.value("shuffle", false);
    c.grad_clip_norm = j.value("grad_clip_norm", 0.0);
    c.validate();
    return c;
}

// Kernels are stored (gates*H) x fan_in but serialized in the documented
// [fan_in x gates*H] row-major layout; flattening the stored matrix in
// column-major order produces exactly that.
json matrix_block(const std::string& name, const Eigen::MatrixXd& stored) {
    std::vector<double> flat(static_cast<std::size_t>(stored.size()));
    std::size_t k = 0;
    for (Eigen::Index col = 0; col < stored.cols(); ++col)
        for (Eigen::Index row = 0; row < stored.rows(); ++row) flat[k++] = stored(row, col);
    return json{{"name", name},
                {"shape", {stored.cols(), stored.rows()}},
                {"data", std::move(flat)}};
}

json vector_block(const std::string& name, const Eigen::VectorXd& v) {
    std::vector<double> flat(v.data(), v.data() + v.size());
    return json{{"name", name}, {"shape", {v.size()}}, {"data", std::move(flat)}};
}

void fill_matrix(Eigen::MatrixXd& stored, const json& block) {
    const auto shape = block.at("shape").get<std::vector<Eigen::Index>>();
    const auto data = block.at("data").get<std::vector<double>>();
    if (shape.size() != 2 || shape[0] != stored.cols() || shape[1] != stored.rows() ||
        static_cast<Eigen::Index>(data.size()) != stored.size())
        throw DataError("model file: block '" + block.at("name").get<std::string>() +
                        "' has unexpected shape");
    std::size_t k = 0;
    for (Eigen::Index col = 0; col < stored.cols(); ++col)
        for (Eigen::Index row = 0; row < stored.rows(); ++row) stored(row, col) = data[k++];
}

void fill_vector(Eigen::VectorXd& v, const json& block) {
    const auto data = block.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != v.size())
        throw DataError("model file: block '" + block.at("name").get<std::string>() +
                        "' has unexpected length");
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = data[static_cast<std::size_t>(i)];
}

} // namespace

std::string serialize_model(const ModelBundle& bundle) {
    if (!bundle.params.all_finite())
        throw NumericError("serialize_model: refusing to write non-finite weights");
    json weights = json::array();
    for (std::size_t l = 0; l < bundle.params.layers.size(); ++l) {
        const std::string prefix = "layer" + std::to_string(l) + "/";
        const auto& lp = bundle.params.layers[l];
        weights.push_back(matrix_block(prefix + "input_kernel", lp.input_kernel));
        weights.push_back(matrix_block(prefix + "recurrent_kernel", lp.recurrent_kernel));
        weights.push_back(vector_block(prefix + "bias", lp.bias));
    }
    weights.push_back(vector_block("dense/weight", bundle.params.dense.weight));
    weights.push_back(json{{"name", "dense/bias"}, {"shape", {1}}, {"data", {bundle.params.dense.bias}}});

    const json doc{{"format_version", kFormatVersion},
                   {"config", config_to_json(bundle.config)},
                   {"scaler", {{"x_min", bundle.scaler.x_min},
                               {"x_max", bundle.scaler.x_max},
                               {"region", bundle.source_region}}},
                   {"weights", std::move(weights)}};
    return doc.dump(2) + "\n";
}

ModelBundle parse_model(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (doc.at("format_version").get<int>() != kFormatVersion)
            throw DataError("unsupported model format_version");

        ModelBundle out;
        out.config = config_from_json(doc.at("config"));
        out.scaler.x_min = doc.at("scaler").at("x_min").get<double>();
        out.scaler.x_max = doc.at("scaler").at("x_max").get<double>();
        out.source_region = doc.at("scaler").value("region", "");
        out.params = zero_parameters(out.config);

        std::map<std::string, const json*> by_name;
        for (const auto& block : doc.at("weights"))
            by_name[block.at("name").get<std::string>()] = &block;
        auto fetch = [&](const std::string& name) -> const json& {
            const auto it = by_name.find(name);
            if (it == by_name.end()) throw DataError("model file: missing block '" + name + "'");
            return *it->second;
        };
        for (std::size_t l = 0; l < out.params.layers.size(); ++l) {
            const std::string prefix = "layer" + std::to_string(l) + "/";
            fill_matrix(out.params.layers[l].input_kernel, fetch(prefix + "input_kernel"));
            fill_matrix(out.params.layers[l].recurrent_kernel, fetch(prefix + "recurrent_kernel"));
            fill_vector(out.params.layers[l].bias, fetch(prefix + "bias"));
        }
        fill_vector(out.params.dense.weight, fetch("dense/weight"));
        out.params.dense.bias = fetch("dense/bias").at("data").at(0).get<double>();
        if (!out.params.all_finite()) throw DataError("model file: non-finite weight");
        return out;
    } catch (const json::exception& e) {
        throw DataError(std::string("model file is missing required fields: ") + e.what());
    }
}

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << serialize_model(bundle);
}

ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

} // namespace rnnf
