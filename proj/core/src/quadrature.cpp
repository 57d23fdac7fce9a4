#include "plate/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "plate/errors.hpp"

namespace plate {

Grid Grid::uniform(double a, double b, std::size_t cells)
{
    if (!(b > a)) throw InvalidArgument("grid needs a < b");
    if (cells < 1) throw InvalidArgument("grid needs at least one cell");
    Grid g;
    g.nodes_.resize(cells + 1);
    const double h = (b - a) / static_cast<double>(cells);
    for (std::size_t i = 0; i <= cells; ++i) g.nodes_[i] = a + h * static_cast<double>(i);
    g.nodes_.back() = b;
    g.segments_.push_back({0, cells, h});
    return g;
}

Grid Grid::from_nodes(std::vector<double> nodes)
{
    if (nodes.size() < 2) throw InvalidArgument("grid needs at least two nodes");
    const double h = (nodes.back() - nodes.front()) / static_cast<double>(nodes.size() - 1);
    if (!(h > 0.0)) throw InvalidArgument("non-uniform grid: nodes must increase");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (std::abs((nodes[i] - nodes[i - 1]) - h) > 1e-9 * h)
            throw InvalidArgument("non-uniform grid");
    Grid g;
    g.nodes_ = std::move(nodes);
    g.segments_.push_back({0, g.nodes_.size() - 1, h});
    return g;
}

Grid Grid::aligned(std::span<const double> breakpoints, std::size_t target_cells)
{
    if (breakpoints.size() < 2) throw InvalidArgument("aligned grid needs two breakpoints");
    const double a = breakpoints.front(), b = breakpoints.back();
    if (!(b > a)) throw InvalidArgument("aligned grid needs increasing breakpoints");
    Grid g;
    g.nodes_.push_back(a);
    for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
        const double lo = breakpoints[s], hi = breakpoints[s + 1];
        if (!(hi > lo)) throw InvalidArgument("aligned grid needs increasing breakpoints");
        const double share = static_cast<double>(target_cells) * (hi - lo) / (b - a);
        std::size_t cells = 2 * static_cast<std::size_t>(std::llround(0.5 * share));
        cells = std::max<std::size_t>(cells, 2);
        const double h = (hi - lo) / static_cast<double>(cells);
        const std::size_t first = g.nodes_.size() - 1;
        for (std::size_t j = 1; j < cells; ++j) g.nodes_.push_back(lo + h * static_cast<double>(j));
        g.nodes_.push_back(hi);
        g.segments_.push_back({first, g.nodes_.size() - 1, h});
    }
    return g;
}

Grid Grid::mirrored(std::span<const double> half_breakpoints, std::size_t target_cells)
{
    if (half_breakpoints.empty() || half_breakpoints.front() != 0.0)
        throw InvalidArgument("mirrored grid needs half breakpoints starting at 0");
    const Grid half = aligned(half_breakpoints, std::max<std::size_t>(target_cells / 2, 2));
    const std::size_t nh = half.nodes_.size();
    Grid g;
    g.nodes_.reserve(2 * nh - 1);
    for (std::size_t i = nh; i-- > 1;) g.nodes_.push_back(-half.nodes_[i]);
    for (std::size_t i = 0; i < nh; ++i) g.nodes_.push_back(half.nodes_[i]);
    const std::size_t mid = nh - 1;
    for (std::size_t s = half.segments_.size(); s-- > 0;) {
        const auto& hs = half.segments_[s];
        g.segments_.push_back({mid - hs.last, mid - hs.first, hs.h});
    }
    for (const auto& hs : half.segments_) g.segments_.push_back({mid + hs.first, mid + hs.last, hs.h});
    return g;
}

// ---------------------------------------------------------------------------

SampledFunction::SampledFunction(Grid grid, std::vector<double> left, std::vector<double> right)
    : grid_(std::move(grid)), left_(std::move(left)), right_(std::move(right))
{
    if (left_.size() != grid_.size() || right_.size() != grid_.size())
        throw InvalidArgument("sample count does not match grid");
}

SampledFunction::SampledFunction(Grid grid, std::vector<double> values)
    : SampledFunction(std::move(grid), values, values)
{
}

SampledFunction SampledFunction::from_function(const Grid& grid,
                                               const std::function<double(double)>& f)
{
    const auto& x = grid.nodes();
    std::vector<double> left(x.size()), right(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) left[i] = right[i] = f(x[i]);
    const auto& segs = grid.segments();
    for (std::size_t s = 0; s < segs.size(); ++s) {
        const double eps = 1e-10 * segs[s].h;
        const std::size_t i0 = segs[s].first, i1 = segs[s].last;
        if (s > 0) right[i0] = f(x[i0] + eps);
        if (s + 1 < segs.size()) left[i1] = f(x[i1] - eps);
    }
    return SampledFunction(grid, std::move(left), std::move(right));
}

double SampledFunction::in_segment(std::size_t s, std::size_t i) const
{
    const auto& seg = grid_.segments()[s];
    return i == seg.last && i != seg.first ? left_[i] : right_[i];
}

double SampledFunction::integral() const
{
    double total = 0.0;
    std::vector<double> buf;
    for (std::size_t s = 0; s < grid_.segments().size(); ++s) {
        const auto& seg = grid_.segments()[s];
        buf.resize(seg.last - seg.first + 1);
        for (std::size_t i = seg.first; i <= seg.last; ++i) buf[i - seg.first] = in_segment(s, i);
        total += simpson(buf, seg.h);
    }
    return total;
}

double SampledFunction::max_abs() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < left_.size(); ++i)
        m = std::max({m, std::abs(left_[i]), std::abs(right_[i])});
    return m;
}

SampledFunction SampledFunction::operator*(const SampledFunction& other) const
{
    if (other.grid_.size() != grid_.size()) throw InvalidArgument("grids differ");
    std::vector<double> l(left_.size()), r(right_.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
        l[i] = left_[i] * other.left_[i];
        r[i] = right_[i] * other.right_[i];
    }
    return SampledFunction(grid_, std::move(l), std::move(r));
}

SampledFunction SampledFunction::scaled(double c) const
{
    std::vector<double> l(left_), r(right_);
    for (auto& v : l) v *= c;
    for (auto& v : r) v *= c;
    return SampledFunction(grid_, std::move(l), std::move(r));
}

// ---------------------------------------------------------------------------

double simpson(std::span<const double> g, double h)
{
    const std::size_t n = g.size() ? g.size() - 1 : 0;
    if (n == 0) return 0.0;
    if (n == 1) return 0.5 * h * (g[0] + g[1]);
    const std::size_t ns = n % 2 == 0 ? n : n - 3;
    double s = 0.0;
    for (std::size_t i = 0; i + 2 <= ns; i += 2) s += g[i] + 4.0 * g[i + 1] + g[i + 2];
    s *= h / 3.0;
    if (ns != n) s += 3.0 * h / 8.0 * (g[ns] + 3.0 * g[ns + 1] + 3.0 * g[ns + 2] + g[ns + 3]);
    return s;
}

void cumulative_simpson(std::span<const double> g, double h, std::span<double> out)
{
    const std::size_t n1 = g.size();
    if (out.size() != n1) throw InvalidArgument("cumulative_simpson: size mismatch");
    if (n1 == 0) return;
    out[0] = 0.0;
    if (n1 == 2) {
        out[1] = 0.5 * h * (g[0] + g[1]);
        return;
    }
    for (std::size_t j = 2; j < n1; j += 2)
        out[j] = out[j - 2] + h / 3.0 * (g[j - 2] + 4.0 * g[j - 1] + g[j]);
    if (n1 > 1) out[1] = h / 12.0 * (5.0 * g[0] + 8.0 * g[1] - g[2]);
    for (std::size_t j = 3; j < n1; j += 2)
        out[j] = out[j - 3] + 3.0 * h / 8.0 * (g[j - 3] + 3.0 * g[j - 2] + 3.0 * g[j - 1] + g[j]);
}

}  // namespace plate
