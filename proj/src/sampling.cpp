// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/sampling.hpp"

#include <stdexcept>

namespace afar {

SampleBuffer::SampleBuffer(int capacity, double period_s)
    : capacity_(capacity), period_s_(period_s) {
    if (capacity < 1) throw std::invalid_argument("buffer capacity must be >= 1");
    entries_.reserve(static_cast<size_t>(capacity));
}

std::optional<BufferedAverage> SampleBuffer::push(const Measurement& m) {
    if (!entries_.empty() && m.t <= last_t_) {
        throw std::invalid_argument("out-of-order sample timestamp");
    }
    last_t_ = m.t;
    entries_.push_back(m);
    if (size() < capacity_) return std::nullopt;

    double sum = 0.0;
    for (const auto& e : entries_) sum += e.rssi_dbm;
    const int center = (capacity_ - 1) / 2;  // earlier middle sample
    BufferedAverage avg{sum / capacity_, entries_[center].rx_pos,
                        entries_[center].t, entries_.back().t};
    entries_.clear();
    return avg;
}

QvFilter::QvFilter(const SamplingParams& p)
    : window_(p.qv_window), threshold_(p.qv_threshold), escalation_(p.qv_escalation) {
    if (window_ < 2) throw std::invalid_argument("qv window must be >= 2");
    if (threshold_ <= 0.0) throw std::invalid_argument("qv threshold must be positive");
    if (escalation_ <= 1.0) throw std::invalid_argument("qv escalation must be > 1");
}

QvFilter::Decision QvFilter::evaluate(std::span<const Measurement> recent) {
    if (recent.size() < static_cast<size_t>(window_)) {
        throw std::invalid_argument("qv filter needs at least `window` readings");
    }
    const auto tail = recent.subspan(recent.size() - window_);

    double mean_conf = 0.0;
    for (const auto& m : tail) mean_conf += m.confidence;
    mean_conf /= window_;
    double var = 0.0;
    for (const auto& m : tail) {
        const double d = m.confidence - mean_conf;
        var += d * d;
    }
    var /= (window_ - 1);  // sample variance

    Decision d;
    d.confidence_variance = var;
    if (var <= threshold_) {
        double mean_rssi = 0.0;
        for (const auto& m : tail) mean_rssi += m.rssi_dbm;
        d.accepted = true;
        d.avg_rssi_dbm = mean_rssi / window_;
        ever_accepted_ = true;
        ++accepted_;
    } else {
        if (!ever_accepted_) threshold_ *= escalation_;
        ++rejected_;
    }
    return d;
}

} // namespace afar
