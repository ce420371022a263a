#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace advexplain {

enum class FeatureKind { Continuous, Integer, Binary, Categorical };

enum class ClassLabel : int { Normal = 0, Dos = 1, Probe = 2 };
inline constexpr int kNumClasses = 3;

std::string class_name(ClassLabel label);
std::optional<ClassLabel> class_from_name(std::string_view name);

// Attack categories of the KDD-99 taxonomy. R2L and U2R records are
// recognized but dropped from the working dataset.
enum class AttackCategory { Normal, Dos, Probe, R2L, U2R };
std::optional<AttackCategory> attack_category(std::string_view attack_name);

// One raw column and its slice of the encoded vector.
struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Continuous;
    std::vector<std::string> levels;  // categorical only
    std::size_t span_begin = 0;
    std::size_t span_end = 0;  // half-open

    std::size_t span_width() const { return span_end - span_begin; }
};

// Ordered feature list whose spans partition [0, encoded_dim).
class FeatureSchema {
public:
    explicit FeatureSchema(std::vector<FeatureSpec> features);

    const std::vector<FeatureSpec>& features() const { return features_; }
    std::size_t encoded_dim() const { return encoded_dim_; }
    std::size_t num_raw_features() const { return features_.size(); }

    bool has(std::string_view name) const;
    const FeatureSpec& at(std::string_view name) const;

    // Stable content hash used to pair models with the data they were trained on.
    std::string fingerprint() const;

    // The 41-feature NSL-KDD schema with categorical levels fixed to the
    // union observed across the official train and test files.
    static FeatureSchema nsl_kdd();

private:
    std::vector<FeatureSpec> features_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::size_t encoded_dim_ = 0;
};

}  // namespace advexplain
