// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "afar/channel.hpp"

namespace afar {

struct SamplingParams {
    int buffer_capacity = 8;       // samples per averaging window
    double buffer_period_s = 0.2;  // expected sample spacing
    int qv_window = 5;             // confidence readings per variance check
    double qv_threshold = 0.005;   // initial confidence-variance threshold
    double qv_escalation = 2.0;    // threshold growth while starved
};

/// Mean of a fixed-size window of readings, stamped with the position of the
/// earlier middle sample (index capacity/2 - 1) so the reported location was
/// physically visited.
struct BufferedAverage {
    double avg_rssi_dbm = 0.0;
    GeoPoint center_pos;
    double t_center = 0.0;
    double t_last = 0.0;
};

/// Fixed-capacity averaging buffer: push samples, get one average per full
/// window, buffer clears after each emission.
class SampleBuffer {
public:
    explicit SampleBuffer(int capacity = 8, double period_s = 0.2);

    /// Appends a sample. Throws std::invalid_argument when the timestamp does
    /// not advance. Returns the window average exactly when the buffer fills.
    std::optional<BufferedAverage> push(const Measurement& m);

    void clear() { entries_.clear(); }
    int size() const { return static_cast<int>(entries_.size()); }
    int capacity() const { return capacity_; }

private:
    int capacity_;
    double period_s_;
    double last_t_ = -1.0;
    std::vector<Measurement> entries_;
};

/// Go/no-go gate on measurement quality: accepts a group of readings only
/// when the sample variance of their confidence values is at or below the
/// threshold. Until the first acceptance of an episode the threshold grows
/// geometrically on every rejection (starvation escalation); after the first
/// acceptance it is frozen.
class QvFilter {
public:
    explicit QvFilter(const SamplingParams& p = {});

    struct Decision {
        bool accepted = false;
        double avg_rssi_dbm = 0.0;        // valid when accepted
        double confidence_variance = 0.0;
    };

    /// Evaluates the last `window` entries of `recent` (which must hold at
    /// least that many).
    Decision evaluate(std::span<const Measurement> recent);

    double threshold() const { return threshold_; }
    bool ever_accepted() const { return ever_accepted_; }
    long accepted_count() const { return accepted_; }
    long rejected_count() const { return rejected_; }

private:
    int window_;
    double threshold_;
    double escalation_;
    bool ever_accepted_ = false;
    long accepted_ = 0;
    long rejected_ = 0;
};

} // namespace afar
