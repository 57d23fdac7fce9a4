#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace plate {

// Nodes on [a, b], uniform inside each segment. Segment ends are where a
// sampled function may jump.
class Grid {
public:
    struct Segment {
        std::size_t first = 0;  // node index of the left end
        std::size_t last = 0;   // node index of the right end
        double h = 0.0;
    };

    static Grid uniform(double a, double b, std::size_t cells);
    // Throws InvalidArgument("non-uniform grid") unless spacing is constant.
    static Grid from_nodes(std::vector<double> nodes);
    // Breakpoints include both ends. Every segment gets an even number (>= 2)
    // of cells, roughly proportional to its length.
    static Grid aligned(std::span<const double> breakpoints, std::size_t target_cells);
    // Mirror of `aligned` over breakpoints of [0, ell] onto [-ell, ell].
    static Grid mirrored(std::span<const double> half_breakpoints, std::size_t target_cells);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<Segment>& segments() const { return segments_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t cells() const { return nodes_.size() - 1; }
    double a() const { return nodes_.front(); }
    double b() const { return nodes_.back(); }

private:
    Grid() = default;
    void finalize();

    std::vector<double> nodes_;
    std::vector<Segment> segments_;
};

// Samples with one-sided limits; left[i] is the limit from the left of node i
// (equal to right[i] where the function is continuous).
class SampledFunction {
public:
    SampledFunction(Grid grid, std::vector<double> left, std::vector<double> right);
    SampledFunction(Grid grid, std::vector<double> values);

    // f must be continuous inside segments; limits at segment ends are taken
    // by evaluating slightly inside each neighbouring segment.
    static SampledFunction from_function(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& left() const { return left_; }
    const std::vector<double>& right() const { return right_; }

    // value used from inside segment s at node i
    double in_segment(std::size_t s, std::size_t i) const;

    double integral() const;
    double max_abs() const;
    SampledFunction operator*(const SampledFunction& other) const;
    SampledFunction scaled(double c) const;

private:
    Grid grid_;
    std::vector<double> left_, right_;
};

// Integral of g over a uniform run g[0..n] with spacing h: Simpson for even n,
// Simpson plus a closing 3/8 panel for odd n >= 3, trapezoid for n = 1.
double simpson(std::span<const double> g, double h);

// out[j] = integral of g from node 0 to node j (same rules, O(n) total,
// j = 1 uses the three-point formula h/12 (5 g0 + 8 g1 - g2)).
void cumulative_simpson(std::span<const double> g, double h, std::span<double> out);

}  // namespace plate
