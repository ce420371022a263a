#include "advexplain/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "advexplain/error.hpp"
#include "advexplain/serialize.hpp"

namespace advexplain {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<const CorrectionResult*> converged_only(
    const std::vector<CorrectionResult>& results) {
    std::vector<const CorrectionResult*> out;
    for (const auto& r : results)
        if (r.converged) out.push_back(&r);
    return out;
}

std::size_t argmax_in_span(const Eigen::VectorXd& x, const FeatureSpec& f) {
    std::size_t best = f.span_begin;
    for (std::size_t s = f.span_begin + 1; s < f.span_end; ++s)
        if (x[static_cast<Eigen::Index>(s)] > x[static_cast<Eigen::Index>(best)])
            best = s;
    return best - f.span_begin;
}

}  // namespace

DeviationSummary mean_deviation(const std::vector<CorrectionResult>& results,
                                const FeatureSchema& schema) {
    DeviationSummary summary;
    summary.total_count = results.size();
    auto included = converged_only(results);
    summary.converged_count = included.size();
    const auto n = static_cast<double>(included.size());
    for (const FeatureSpec& f : schema.features()) {
        if (f.kind == FeatureKind::Categorical) continue;
        const auto dim = static_cast<Eigen::Index>(f.span_begin);
        double mean = 0.0, var = 0.0;
        if (!included.empty()) {
            for (const auto* r : included) mean += r->delta[dim];
            mean /= n;
            for (const auto* r : included) {
                const double d = r->delta[dim] - mean;
                var += d * d;
            }
            var /= n;
        }
        summary.rows.push_back({f.name, mean, std::sqrt(var), included.size()});
    }
    std::stable_sort(summary.rows.begin(), summary.rows.end(),
                     [](const FeatureDeviation& a, const FeatureDeviation& b) {
                         return std::abs(a.mean) > std::abs(b.mean);
                     });
    return summary;
}

FeatureDistribution feature_distribution(const std::vector<CorrectionResult>& results,
                                         const std::string& feature_name,
                                         const FeatureSchema& schema,
                                         const NormalizationStats& stats) {
    const FeatureSpec& f = schema.at(feature_name);
    if (f.kind == FeatureKind::Categorical)
        throw ValueError("feature_distribution: '" + feature_name +
                         "' is categorical; use categorical_comparison");
    const auto dim = static_cast<Eigen::Index>(f.span_begin);
    FeatureDistribution dist;
    for (const auto* r : converged_only(results)) {
        dist.x0_values.push_back(denormalize(r->x0, stats)[dim]);
        dist.x_hat_values.push_back(denormalize(r->x_hat, stats)[dim]);
    }
    return dist;
}

CategoricalComparison categorical_comparison(const std::vector<CorrectionResult>& results,
                                             const FeatureSchema& schema,
                                             const NormalizationStats& stats) {
    CategoricalComparison cmp;
    auto included = converged_only(results);
    cmp.included_count = included.size();
    for (const FeatureSpec& f : schema.features()) {
        if (f.kind != FeatureKind::Categorical) continue;
        CategoricalFeatureComparison fc;
        fc.feature = f.name;
        for (const auto& level : f.levels) fc.levels.push_back({level, 0, 0});
        for (const auto* r : included) {
            const Eigen::VectorXd raw_x0 = denormalize(r->x0, stats);
            const Eigen::VectorXd rounded =
                denormalize(round_for_indicator(r->x_hat, schema, stats), stats);
            fc.levels[argmax_in_span(raw_x0, f)].x0_count += 1;
            fc.levels[argmax_in_span(rounded, f)].x_hat_count += 1;
        }
        cmp.features.push_back(std::move(fc));
    }
    return cmp;
}

Projection2D fit_projection(const Eigen::MatrixXd& reference_matrix) {
    if (reference_matrix.rows() < 2)
        throw ValueError("fit_projection needs at least 2 reference rows");
    Eigen::RowVectorXd mean = reference_matrix.colwise().mean();
    Eigen::MatrixXd centered = reference_matrix.rowwise() - mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered) /
                          static_cast<double>(reference_matrix.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw ValueError("eigendecomposition failed");
    const Eigen::Index d = cov.rows();
    Projection2D proj;
    proj.components = Eigen::MatrixXd(2, d);
    // Eigen sorts eigenvalues ascending; take the last two, largest first.
    proj.components.row(0) = solver.eigenvectors().col(d - 1).transpose();
    proj.components.row(1) = solver.eigenvectors().col(d - 2).transpose();
    for (int r = 0; r < 2; ++r) {
        Eigen::Index imax = 0;
        for (Eigen::Index i = 1; i < d; ++i)
            if (std::abs(proj.components(r, i)) > std::abs(proj.components(r, imax)))
                imax = i;
        if (proj.components(r, imax) < 0) proj.components.row(r) *= -1.0;
    }
    return proj;
}

Eigen::MatrixXd apply_projection(const Projection2D& projection,
                                 const Eigen::MatrixXd& xs) {
    if (xs.cols() != projection.components.cols())
        throw ValueError("apply_projection: dimension mismatch");
    return xs * projection.components.transpose();
}

// ---------------------------------------------------------------------------
// SVG output. Hand-rolled static charts; no external plotting dependency.

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
}

std::string svg_header(int width, int height) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
       << height << "\">\n";
    return os.str();
}

std::string deviation_bars_svg(const DeviationSummary& summary, int top_k) {
    const int shown = std::min<int>(top_k, static_cast<int>(summary.rows.size()));
    const int row_h = 22, margin_top = 30, label_w = 230;
    const int width = 640, plot_w = width - label_w - 20;
    const int height = margin_top + shown * row_h + 20;
    double max_abs = 1e-12;
    for (int i = 0; i < shown; ++i)
        max_abs = std::max(max_abs, std::abs(summary.rows[i].mean));
    const double cx = label_w + plot_w / 2.0;
    const double scale = (plot_w / 2.0 - 4) / max_abs;

    std::ostringstream os;
    os << svg_header(width, height);
    os << "  <text x=\"10\" y=\"18\" font-size=\"13\" font-family=\"sans-serif\">"
          "mean deviation (x0 - x_hat), normalized space</text>\n";
    os << "  <line x1=\"" << cx << "\" y1=\"" << margin_top << "\" x2=\"" << cx
       << "\" y2=\"" << height - 10 << "\" stroke=\"#888\"/>\n";
    for (int i = 0; i < shown; ++i) {
        const auto& row = summary.rows[static_cast<std::size_t>(i)];
        const double y = margin_top + i * row_h + 4;
        const double w = row.mean * scale;
        const double x = w >= 0 ? cx : cx + w;
        os << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\""
           << std::abs(w) << "\" height=\"" << row_h - 8
           << "\" fill=\"" << (row.mean >= 0 ? "#4878a8" : "#c44e52") << "\"/>\n";
        os << "  <text x=\"" << label_w - 6 << "\" y=\"" << y + 11
           << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">"
           << xml_escape(row.feature) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string categorical_histogram_svg(const CategoricalComparison& cmp) {
    // Grouped bars per categorical feature; levels with zero counts in both
    // columns are omitted from the drawing.
    struct Shown { std::string label; long a; long b; };
    std::vector<Shown> rows;
    for (const auto& f : cmp.features)
        for (const auto& lc : f.levels)
            if (lc.x0_count > 0 || lc.x_hat_count > 0)
                rows.push_back({f.feature + "=" + lc.level, lc.x0_count, lc.x_hat_count});
    const int row_h = 30, margin_top = 30, label_w = 240;
    const int width = 640, plot_w = width - label_w - 20;
    const int height = margin_top + static_cast<int>(rows.size()) * row_h + 20;
    long max_count = 1;
    for (const auto& r : rows) max_count = std::max({max_count, r.a, r.b});
    const double scale = static_cast<double>(plot_w - 4) / static_cast<double>(max_count);

    std::ostringstream os;
    os << svg_header(width, std::max(height, 60));
    os << "  <text x=\"10\" y=\"18\" font-size=\"13\" font-family=\"sans-serif\">"
          "categorical level counts: x0 (blue) vs rounded x_hat (orange)</text>\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = margin_top + static_cast<double>(i) * row_h + 4;
        os << "  <rect x=\"" << label_w << "\" y=\"" << y << "\" width=\""
           << rows[i].a * scale << "\" height=\"10\" fill=\"#4878a8\"/>\n";
        os << "  <rect x=\"" << label_w << "\" y=\"" << y + 11 << "\" width=\""
           << rows[i].b * scale << "\" height=\"10\" fill=\"#e08214\"/>\n";
        os << "  <text x=\"" << label_w - 6 << "\" y=\"" << y + 14
           << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">"
           << xml_escape(rows[i].label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string projection_scatter_svg(const Eigen::MatrixXd& p0,
                                   const Eigen::MatrixXd& p_hat) {
    const int width = 560, height = 560, margin = 40;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (p0.rows() > 0) {
        Eigen::MatrixXd all(p0.rows() + p_hat.rows(), 2);
        all << p0, p_hat;
        xmin = all.col(0).minCoeff(); xmax = all.col(0).maxCoeff();
        ymin = all.col(1).minCoeff(); ymax = all.col(1).maxCoeff();
        if (xmax - xmin < 1e-12) xmax = xmin + 1;
        if (ymax - ymin < 1e-12) ymax = ymin + 1;
    }
    auto sx = [&](double v) {
        return margin + (v - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto sy = [&](double v) {
        return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin);
    };
    std::ostringstream os;
    os << svg_header(width, height);
    os << "  <text x=\"10\" y=\"18\" font-size=\"13\" font-family=\"sans-serif\">"
          "2-D projection: x0 (circles) vs x_hat (crosses)</text>\n";
    for (Eigen::Index i = 0; i < p0.rows(); ++i)
        os << "  <circle cx=\"" << sx(p0(i, 0)) << "\" cy=\"" << sy(p0(i, 1))
           << "\" r=\"3\" fill=\"none\" stroke=\"#4878a8\"/>\n";
    for (Eigen::Index i = 0; i < p_hat.rows(); ++i) {
        const double x = sx(p_hat(i, 0)), y = sy(p_hat(i, 1));
        os << "  <path d=\"M" << x - 3 << " " << y - 3 << " L" << x + 3 << " "
           << y + 3 << " M" << x - 3 << " " << y + 3 << " L" << x + 3 << " "
           << y - 3 << "\" stroke=\"#e08214\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace

void emit_report(const DeviationSummary& summary,
                 const CategoricalComparison& comparison,
                 const std::vector<CorrectionResult>& results,
                 const FeatureSchema& schema, const NormalizationStats& stats,
                 const std::filesystem::path& output_dir, int top_k) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (!std::filesystem::is_directory(output_dir))
        throw IoError("cannot create output directory " + output_dir.string());

    // deviation_summary.json
    ordered_json dev;
    dev["converged_count"] = summary.converged_count;
    dev["total_count"] = summary.total_count;
    dev["non_converged_count"] = summary.total_count - summary.converged_count;
    dev["features"] = ordered_json::array();
    for (const auto& row : summary.rows) {
        dev["features"].push_back({{"feature", row.feature},
                                   {"mean", row.mean},
                                   {"stddev", row.stddev},
                                   {"count", row.count}});
    }
    write_file(output_dir / "deviation_summary.json", dev.dump(2) + "\n");

    // deviation_summary.csv
    {
        std::ostringstream csv;
        csv << "feature,mean,stddev,count\n";
        csv.precision(17);
        for (const auto& row : summary.rows)
            csv << row.feature << "," << row.mean << "," << row.stddev << ","
                << row.count << "\n";
        write_file(output_dir / "deviation_summary.csv", csv.str());
    }

    // categorical_comparison.json
    ordered_json cat;
    cat["included_count"] = comparison.included_count;
    cat["features"] = ordered_json::array();
    for (const auto& f : comparison.features) {
        ordered_json levels = ordered_json::array();
        for (const auto& lc : f.levels)
            levels.push_back({{"level", lc.level},
                              {"x0_count", lc.x0_count},
                              {"x_hat_count", lc.x_hat_count}});
        cat["features"].push_back({{"feature", f.feature}, {"levels", levels}});
    }
    write_file(output_dir / "categorical_comparison.json", cat.dump(2) + "\n");

    write_results_jsonl(output_dir / "results.jsonl", results, stats);

    // Charts. The projection is fitted on the converged x0 set.
    write_file(output_dir / "deviation_bars.svg",
               deviation_bars_svg(summary, top_k));
    write_file(output_dir / "categorical_histogram.svg",
               categorical_histogram_svg(comparison));
    Eigen::MatrixXd p0(0, 2), p_hat(0, 2);
    auto included = converged_only(results);
    if (included.size() >= 2) {
        Eigen::MatrixXd X0(static_cast<Eigen::Index>(included.size()),
                           schema.encoded_dim());
        Eigen::MatrixXd XH(X0.rows(), X0.cols());
        for (std::size_t i = 0; i < included.size(); ++i) {
            X0.row(static_cast<Eigen::Index>(i)) = included[i]->x0.transpose();
            XH.row(static_cast<Eigen::Index>(i)) = included[i]->x_hat.transpose();
        }
        Projection2D proj = fit_projection(X0);
        p0 = apply_projection(proj, X0);
        p_hat = apply_projection(proj, XH);
    }
    write_file(output_dir / "projection_scatter.svg",
               projection_scatter_svg(p0, p_hat));
}

}  // namespace advexplain
