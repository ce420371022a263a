#include "advexplain/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "advexplain/error.hpp"

namespace advexplain {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr char kMagic[8] = {'A', 'X', 'M', 'O', 'D', 'E', 'L', '1'};
static_assert(std::endian::native == std::endian::little,
              "model container assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
std::string get_string(std::istream& in) {
    std::string s(get_u32(in), '\0');
    in.read(s.data(), static_cast<std::streamsize>(s.size()));
    return s;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from_json(const ordered_json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

}  // namespace

void save_model(const std::filesystem::path& path, const ClassifierModel& model,
                const std::string& schema_fingerprint,
                const std::string& stats_fingerprint) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, model.architecture() == Architecture::Linear ? 0u : 1u);
    put_u32(out, static_cast<std::uint32_t>(model.input_dim()));
    put_u32(out, static_cast<std::uint32_t>(model.n_classes()));
    put_string(out, schema_fingerprint);
    put_string(out, stats_fingerprint);
    put_u32(out, static_cast<std::uint32_t>(model.hidden_widths().size()));
    for (int w : model.hidden_widths()) put_u32(out, static_cast<std::uint32_t>(w));
    put_u32(out, static_cast<std::uint32_t>(model.layers().size()));
    for (const Layer& layer : model.layers()) {
        put_u64(out, static_cast<std::uint64_t>(layer.W.rows()));
        put_u64(out, static_cast<std::uint64_t>(layer.W.cols()));
        // Row-major weight block, then the bias.
        for (Eigen::Index r = 0; r < layer.W.rows(); ++r)
            out.write(reinterpret_cast<const char*>(layer.W.row(r).eval().data()),
                      static_cast<std::streamsize>(sizeof(double) * layer.W.cols()));
        out.write(reinterpret_cast<const char*>(layer.b.data()),
                  static_cast<std::streamsize>(sizeof(double) * layer.b.size()));
    }
    if (!out) throw IoError("write failed for " + path.string());
}

LoadedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError(path.string() + ": not a model container");
    const Architecture arch =
        get_u32(in) == 0 ? Architecture::Linear : Architecture::Mlp;
    const int input_dim = static_cast<int>(get_u32(in));
    const int n_classes = static_cast<int>(get_u32(in));
    LoadedModel loaded{ClassifierModel::linear(1, kNumClasses), "", ""};
    loaded.schema_fingerprint = get_string(in);
    loaded.stats_fingerprint = get_string(in);
    std::vector<int> hidden(get_u32(in));
    for (auto& w : hidden) w = static_cast<int>(get_u32(in));
    std::vector<Layer> layers(get_u32(in));
    for (Layer& layer : layers) {
        const auto rows = static_cast<Eigen::Index>(get_u64(in));
        const auto cols = static_cast<Eigen::Index>(get_u64(in));
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> W(rows, cols);
        in.read(reinterpret_cast<char*>(W.data()),
                static_cast<std::streamsize>(sizeof(double) * rows * cols));
        layer.W = W;
        layer.b.resize(rows);
        in.read(reinterpret_cast<char*>(layer.b.data()),
                static_cast<std::streamsize>(sizeof(double) * rows));
    }
    if (!in) throw IoError(path.string() + ": truncated model container");
    loaded.model = make_model_from_layers(arch, input_dim, n_classes,
                                          std::move(hidden), std::move(layers));
    return loaded;
}

void save_preprocess(const std::filesystem::path& path,
                     const FeatureSchema& schema, const NormalizationStats& stats,
                     const Eigen::VectorXd& x_min, const Eigen::VectorXd& x_max) {
    ordered_json j;
    j["schema_fingerprint"] = schema.fingerprint();
    j["mean"] = vector_to_json(stats.mean);
    j["std"] = vector_to_json(stats.std);
    j["x_min"] = vector_to_json(x_min);
    j["x_max"] = vector_to_json(x_max);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

Preprocess load_preprocess(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    ordered_json j = ordered_json::parse(in);
    Preprocess p;
    p.schema_fingerprint = j.at("schema_fingerprint").get<std::string>();
    p.stats.mean = vector_from_json(j.at("mean"));
    p.stats.std = vector_from_json(j.at("std"));
    p.x_min = vector_from_json(j.at("x_min"));
    p.x_max = vector_from_json(j.at("x_max"));
    return p;
}

void save_history_csv(const std::filesystem::path& path, const TrainHistory& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.precision(17);
    out << "epoch,train_loss,val_accuracy\n";
    for (std::size_t e = 0; e < history.train_loss.size(); ++e)
        out << e << "," << history.train_loss[e] << "," << history.val_accuracy[e]
            << "\n";
    out << "# best_epoch," << history.best_epoch << "\n";
}

void save_eval_json(const std::filesystem::path& path, const EvalReport& report) {
    ordered_json j;
    j["accuracy"] = report.accuracy;
    j["confusion"] = ordered_json::array();
    for (const auto& row : report.confusion) {
        ordered_json r = ordered_json::array();
        for (long v : row) r.push_back(v);
        j["confusion"].push_back(r);
    }
    for (int c = 0; c < kNumClasses; ++c) {
        const std::string name = class_name(static_cast<ClassLabel>(c));
        j["precision"][name] = report.precision[static_cast<std::size_t>(c)];
        j["recall"][name] = report.recall[static_cast<std::size_t>(c)];
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_results_jsonl(const std::filesystem::path& path,
                         const std::vector<CorrectionResult>& results,
                         const NormalizationStats& stats) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& r : results) {
        ordered_json j;
        j["x0"] = vector_to_json(denormalize(r.x0, stats));
        j["x_hat"] = vector_to_json(denormalize(r.x_hat, stats));
        j["delta"] = vector_to_json(r.delta);
        j["converged"] = r.converged;
        j["iterations"] = r.iterations;
        if (r.converged)
            j["feasible_distance"] = r.feasible_distance;
        else
            j["feasible_distance"] = nullptr;
        out << j.dump() << "\n";
    }
}

std::vector<CorrectionResult> read_results_jsonl(const std::filesystem::path& path,
                                                 const NormalizationStats& stats) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<CorrectionResult> results;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line);
        CorrectionResult r;
        r.x0 = normalize(vector_from_json(j.at("x0")), stats);
        r.x_hat = normalize(vector_from_json(j.at("x_hat")), stats);
        r.delta = vector_from_json(j.at("delta"));
        r.converged = j.at("converged").get<bool>();
        r.iterations = j.at("iterations").get<int>();
        r.feasible_distance = j.at("feasible_distance").is_null()
                                  ? std::numeric_limits<double>::quiet_NaN()
                                  : j.at("feasible_distance").get<double>();
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace advexplain
