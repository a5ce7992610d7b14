#include <algorithm>

#include <fmt/core.h>

#include "pcm/eval.hpp"

namespace pcm {

std::string format_percent(double value) { return fmt::format("{:.1f}", value * 100.0); }

namespace {

constexpr std::array<Averaging, 3> kAveragings{Averaging::Macro, Averaging::Micro, Averaging::Weighted};
constexpr std::size_t kCell = 8;  // width of "Weighted"

std::size_t index_of(std::vector<std::string> &names, const std::string &name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) {
        return static_cast<std::size_t>(it - names.begin());
    }
    names.push_back(name);
    return names.size() - 1;
}

std::string pad(const std::string &s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string rpad(const std::string &s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

ReportGrid report_grid(std::span<const EvalReport> reports) {
    ReportGrid grid;
    for (const auto &r : reports) {
        index_of(grid.models, r.model);
        index_of(grid.datasets, r.dataset);
    }
    grid.cells.assign(grid.models.size(), std::vector<std::optional<double>>(6 * grid.datasets.size()));
    for (const auto &r : reports) {
        const std::size_t row = index_of(grid.models, r.model);
        const std::size_t base = 6 * index_of(grid.datasets, r.dataset);
        for (std::size_t a = 0; a < kAveragings.size(); ++a) {
            grid.cells[row][base + a] = r.metrics.get(kAveragings[a]).precision;
            grid.cells[row][base + 3 + a] = r.metrics.get(kAveragings[a]).recall;
        }
    }
    return grid;
}

std::string render_report(std::span<const EvalReport> reports) {
    const ReportGrid grid = report_grid(reports);
    std::size_t name_width = 5;
    for (const auto &m : grid.models) {
        name_width = std::max(name_width, m.size());
    }
    // a group of three cells: "| x | y | z " -> 3 * (kCell + 3) - 1 inner characters
    const std::size_t half = 3 * (kCell + 3) - 1;
    const std::size_t full = 2 * half + 1;
    std::string dataset_line = pad("", name_width) + " ";
    std::string metric_line = pad("", name_width) + " ";
    std::string column_line = pad("Model", name_width) + " ";
    for (const auto &d : grid.datasets) {
        dataset_line += "|" + pad(" " + d, full);
        metric_line += "|" + pad(" Precision", half) + "|" + pad(" Recall", half);
        for (int side = 0; side < 2; ++side) {
            for (const char *label : {"Macro", "Micro", "Weighted"}) {
                column_line += "| " + pad(label, kCell) + " ";
            }
        }
    }
    std::string out;
    const auto emit = [&](std::string line) {
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + "\n";
    };
    if (!grid.datasets.empty()) {
        emit(dataset_line);
        emit(metric_line);
    }
    emit(column_line);
    emit(std::string(column_line.size(), '-'));
    for (std::size_t m = 0; m < grid.models.size(); ++m) {
        std::string line = pad(grid.models[m], name_width) + " ";
        for (const auto &cell : grid.cells[m]) {
            line += "| " + rpad(cell ? format_percent(*cell) : "-", kCell) + " ";
        }
        emit(line);
    }
    return out;
}

nlohmann::json report_to_json(std::span<const EvalReport> reports) {
    const ReportGrid grid = report_grid(reports);
    nlohmann::json table{{"models", grid.models}, {"datasets", grid.datasets}};
    table["columns"] = nlohmann::json::array();
    for (const auto &d : grid.datasets) {
        for (const char *metric : {"precision", "recall"}) {
            for (const char *avg : {"macro", "micro", "weighted"}) {
                table["columns"].push_back({{"dataset", d}, {"metric", metric}, {"averaging", avg}});
            }
        }
    }
    table["rows"] = nlohmann::json::array();
    for (std::size_t m = 0; m < grid.models.size(); ++m) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto &cell : grid.cells[m]) {
            row.push_back(cell ? nlohmann::json(format_percent(*cell)) : nlohmann::json(nullptr));
        }
        table["rows"].push_back(row);
    }
    nlohmann::json runs = nlohmann::json::array();
    for (const auto &r : reports) {
        nlohmann::json folds = nlohmann::json::array();
        for (const auto &f : r.folds) {
            nlohmann::json fj{{"fold", f.fold},
                              {"train_rows", f.train_rows},
                              {"test_rows", f.test_rows},
                              {"confusion", to_json(f.cm)}};
            fj["metrics"] = f.test_rows > 0 ? to_json(f.metrics) : nlohmann::json(nullptr);
            if (!f.epoch_losses.empty()) {
                fj["epoch_losses"] = f.epoch_losses;
            }
            folds.push_back(fj);
        }
        runs.push_back({{"model", r.model},
                        {"dataset", r.dataset},
                        {"config", r.config},
                        {"confusion", to_json(r.pooled)},
                        {"metrics", to_json(r.metrics)},
                        {"fold_mean", to_json(r.fold_mean)},
                        {"fold_std", to_json(r.fold_std)},
                        {"folds", folds}});
    }
    return {{"table", table}, {"runs", runs}};
}

}  // namespace pcm
