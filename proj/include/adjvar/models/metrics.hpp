#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace adjvar {

// Positive class is 1 (Grant).
struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    std::size_t positives() const noexcept { return tp + fn; }
    std::size_t negatives() const noexcept { return tn + fp; }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct Metrics {
    Confusion confusion;
    double accuracy = 0;
    double r2 = 0;  // on hard 0/1 labels
    double precision = 0;
    double recall = 0;

    nlohmann::json to_json() const {
        return {{"accuracy", accuracy},
                {"r2", r2},
                {"precision", precision},
                {"recall", recall},
                {"confusion", {{"tp", confusion.tp}, {"fp", confusion.fp}, {"tn", confusion.tn}, {"fn", confusion.fn}}}};
    }
};

inline Metrics metrics_from_confusion(const Confusion& c) {
    const std::size_t n = c.total();
    if (n == 0) throw std::invalid_argument("evaluate: empty test set");
    Metrics m;
    m.confusion = c;
    const auto nd = static_cast<double>(n);
    m.accuracy = static_cast<double>(c.tp + c.tn) / nd;
    m.precision = c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    m.recall = c.positives() == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.positives());
    // SSres counts misclassified rows; SStot = pos * neg / n about the label mean.
    const double ss_res = static_cast<double>(c.fp + c.fn);
    const double ss_tot = static_cast<double>(c.positives()) * static_cast<double>(c.negatives()) / nd;
    if (ss_tot == 0.0) {
        m.r2 = ss_res == 0.0 ? 1.0 : 0.0;
    } else {
        m.r2 = 1.0 - ss_res / ss_tot;
    }
    return m;
}

template <class Truth, class Pred>
Confusion confusion_matrix(const Truth& y_true, const Pred& y_pred) {
    const auto n = static_cast<std::size_t>(y_true.size());
    if (static_cast<std::size_t>(y_pred.size()) != n) throw std::invalid_argument("evaluate: label length mismatch");
    Confusion c;
    for (std::size_t i = 0; i < n; ++i) {
        const bool t = y_true[static_cast<decltype(y_true.size())>(i)] > 0.5;
        const bool p = y_pred[static_cast<decltype(y_pred.size())>(i)] > 0.5;
        if (t && p) ++c.tp;
        else if (t) ++c.fn;
        else if (p) ++c.fp;
        else ++c.tn;
    }
    return c;
}

template <class Truth, class Pred>
Metrics evaluate_labels(const Truth& y_true, const Pred& y_pred) {
    return metrics_from_confusion(confusion_matrix(y_true, y_pred));
}

// Any model exposing predict(X) -> 0/1 vector.
template <class Model, class X, class Y>
Metrics evaluate(const Model& model, const X& x, const Y& y) {
    if (y.size() == 0) throw std::invalid_argument("evaluate: empty test set");
    return evaluate_labels(y, model.predict(x));
}

}  // namespace adjvar
