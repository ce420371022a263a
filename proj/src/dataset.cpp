#include "advexplain/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <istream>
#include <set>
#include <sstream>

#include "advexplain/error.hpp"

namespace advexplain {

namespace {

constexpr std::size_t kRawFeatureCount = 41;

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_numeric(const std::string& s, const std::string& context) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(context + ": non-numeric value '" + s + "'");
    return value;
}

}  // namespace

std::vector<RawRecord> parse_records(std::istream& in) {
    std::vector<RawRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != kRawFeatureCount + 1 &&
            fields.size() != kRawFeatureCount + 2) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected ≥42 fields, got " +
                             std::to_string(fields.size()));
        }
        RawRecord rec;
        rec.label = fields[kRawFeatureCount];
        if (fields.size() == kRawFeatureCount + 2) {
            rec.difficulty = static_cast<int>(parse_numeric(
                fields[kRawFeatureCount + 1],
                "line " + std::to_string(line_no) + " difficulty"));
        }
        fields.resize(kRawFeatureCount);
        rec.fields = std::move(fields);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<std::pair<RawRecord, ClassLabel>> filter_and_relabel(
    const std::vector<RawRecord>& records) {
    std::vector<std::pair<RawRecord, ClassLabel>> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        auto cat = attack_category(rec.label);
        if (!cat)
            throw ValueError("unknown attack name '" + rec.label + "'");
        switch (*cat) {
            case AttackCategory::Normal:
                out.emplace_back(rec, ClassLabel::Normal);
                break;
            case AttackCategory::Dos:
                out.emplace_back(rec, ClassLabel::Dos);
                break;
            case AttackCategory::Probe:
                out.emplace_back(rec, ClassLabel::Probe);
                break;
            case AttackCategory::R2L:
            case AttackCategory::U2R:
                break;  // out of scope, dropped
        }
    }
    return out;
}

Eigen::VectorXd encode_record(const RawRecord& record, const FeatureSchema& schema) {
    if (record.fields.size() != schema.num_raw_features())
        throw ValueError("record has " + std::to_string(record.fields.size()) +
                         " fields, schema expects " +
                         std::to_string(schema.num_raw_features()));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(
        static_cast<Eigen::Index>(schema.encoded_dim()));
    const auto& features = schema.features();
    for (std::size_t i = 0; i < features.size(); ++i) {
        const FeatureSpec& f = features[i];
        const std::string& raw = record.fields[i];
        if (f.kind == FeatureKind::Categorical) {
            auto it = std::find(f.levels.begin(), f.levels.end(), raw);
            if (it == f.levels.end())
                throw ValueError(f.name + ": unseen level '" + raw + "'");
            const auto slot = static_cast<std::size_t>(it - f.levels.begin());
            x[static_cast<Eigen::Index>(f.span_begin + slot)] = 1.0;
        } else {
            x[static_cast<Eigen::Index>(f.span_begin)] =
                parse_numeric(raw, f.name);
        }
    }
    return x;
}

Eigen::MatrixXd encode(const std::vector<RawRecord>& records,
                       const FeatureSchema& schema) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(records.size()),
                      static_cast<Eigen::Index>(schema.encoded_dim()));
    for (std::size_t i = 0; i < records.size(); ++i)
        X.row(static_cast<Eigen::Index>(i)) = encode_record(records[i], schema);
    return X;
}

std::string NormalizationStats::fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double v) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (Eigen::Index i = 0; i < mean.size(); ++i) mix(mean[i]);
    for (Eigen::Index i = 0; i < std.size(); ++i) mix(std[i]);
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

NormalizationStats fit_normalization(const Eigen::MatrixXd& train_matrix) {
    if (train_matrix.rows() == 0) throw ValueError("cannot fit stats on empty matrix");
    NormalizationStats stats;
    stats.mean = train_matrix.colwise().mean();
    Eigen::MatrixXd centered = train_matrix.rowwise() - stats.mean.transpose();
    stats.std = (centered.array().square().colwise().mean()).sqrt();
    for (Eigen::Index i = 0; i < stats.std.size(); ++i)
        if (stats.std[i] <= 0.0) stats.std[i] = 1.0;  // constant column
    return stats;
}

Eigen::VectorXd normalize(const Eigen::VectorXd& x, const NormalizationStats& stats) {
    if (x.size() != stats.mean.size())
        throw ValueError("normalize: dimension mismatch");
    return (x - stats.mean).cwiseQuotient(stats.std);
}

Eigen::VectorXd denormalize(const Eigen::VectorXd& x, const NormalizationStats& stats) {
    if (x.size() != stats.mean.size())
        throw ValueError("denormalize: dimension mismatch");
    return x.cwiseProduct(stats.std) + stats.mean;
}

Eigen::MatrixXd normalize(const Eigen::MatrixXd& X, const NormalizationStats& stats) {
    if (X.cols() != stats.mean.size())
        throw ValueError("normalize: dimension mismatch");
    return (X.rowwise() - stats.mean.transpose()).array().rowwise() /
           stats.std.transpose().array();
}

Eigen::MatrixXd denormalize(const Eigen::MatrixXd& X, const NormalizationStats& stats) {
    if (X.cols() != stats.mean.size())
        throw ValueError("denormalize: dimension mismatch");
    return (X.array().rowwise() * stats.std.transpose().array()).matrix().rowwise() +
           stats.mean.transpose();
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> compute_bounds(const Eigen::MatrixXd& X) {
    if (X.rows() == 0) throw ValueError("cannot compute bounds on empty matrix");
    return {X.colwise().minCoeff(), X.colwise().maxCoeff()};
}

namespace {

Dataset assemble(std::vector<std::pair<RawRecord, ClassLabel>> labeled,
                 const FeatureSchema& schema) {
    Dataset ds{Eigen::MatrixXd(), {}, schema, {}, {}, {}};
    std::vector<RawRecord> records;
    records.reserve(labeled.size());
    ds.y.reserve(labeled.size());
    for (auto& [rec, label] : labeled) {
        records.push_back(std::move(rec));
        ds.y.push_back(label);
    }
    ds.X = encode(records, schema);
    return ds;
}

}  // namespace

Dataset build_train_dataset(std::istream& in, const FeatureSchema& schema) {
    Dataset ds = assemble(filter_and_relabel(parse_records(in)), schema);
    ds.stats = fit_normalization(ds.X);
    ds.X = normalize(ds.X, ds.stats);
    std::tie(ds.x_min, ds.x_max) = compute_bounds(ds.X);
    return ds;
}

Dataset build_eval_dataset(std::istream& in, const FeatureSchema& schema,
                           const NormalizationStats& stats,
                           const Eigen::VectorXd& x_min,
                           const Eigen::VectorXd& x_max) {
    Dataset ds = assemble(filter_and_relabel(parse_records(in)), schema);
    ds.stats = stats;
    ds.X = normalize(ds.X, stats);
    ds.x_min = x_min;
    ds.x_max = x_max;
    return ds;
}

BalancedSampler::BalancedSampler(const Dataset& dataset, std::uint64_t seed)
    : dataset_(&dataset), by_class_(kNumClasses), rng_(seed) {
    for (std::size_t i = 0; i < dataset.y.size(); ++i)
        by_class_[static_cast<int>(dataset.y[i])].push_back(i);
    for (int c = 0; c < kNumClasses; ++c)
        if (by_class_[c].empty())
            throw ValueError("class '" + class_name(static_cast<ClassLabel>(c)) +
                             "' has no samples");
}

std::pair<Eigen::MatrixXd, std::vector<ClassLabel>> BalancedSampler::sample(
    int batch_size) {
    if (batch_size < kNumClasses)
        throw ValueError("batch_size must be >= number of classes");
    const int base = batch_size / kNumClasses;
    const int remainder = batch_size % kNumClasses;
    Eigen::MatrixXd X(batch_size, dataset_->X.cols());
    std::vector<ClassLabel> y(batch_size);
    int row = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        const int take = base + (c < remainder ? 1 : 0);
        const auto& pool = by_class_[c];
        for (int k = 0; k < take; ++k) {
            const std::size_t idx = pool[rng_() % pool.size()];
            X.row(row) = dataset_->X.row(static_cast<Eigen::Index>(idx));
            y[row] = static_cast<ClassLabel>(c);
            ++row;
        }
    }
    return {std::move(X), std::move(y)};
}

}  // namespace advexplain
