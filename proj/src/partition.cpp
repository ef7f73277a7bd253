#include "fskmc/partition.hpp"

#include <algorithm>
#include <numeric>

namespace fskmc {

namespace {

std::string axis_list(const std::vector<int>& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

}  // namespace

std::vector<Site> tile_sites(const Lattice& lattice, const Tile& tile)
{
    const auto d = static_cast<std::size_t>(lattice.dimension());
    std::vector<Site> out;
    std::vector<int> c(d, 0);
    for (;;) {
        std::vector<int> coords(d);
        for (std::size_t a = 0; a < d; ++a)
            coords[a] = tile.origin[a] + c[a];
        out.push_back(lattice.site_index(coords));
        std::size_t a = 0;
        while (a < d && ++c[a] == tile.extent[a]) {
            c[a] = 0;
            ++a;
        }
        if (a == d)
            break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Site> dilate(const Lattice& lattice, const std::vector<Site>& sites, int radius)
{
    std::vector<char> mark(lattice.size(), 0);
    for (Site x : sites)
        lattice.for_each_in_ball(x, radius, [&](Site z) { mark[z] = 1; });
    std::vector<Site> out;
    for (std::size_t z = 0; z < mark.size(); ++z)
        if (mark[z])
            out.push_back(static_cast<Site>(z));
    return out;
}

void check_independence(const Lattice& lattice, const std::vector<std::vector<Site>>& cell_sites,
                        const std::vector<Color>& colors, int interaction_range, int update_radius)
{
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    for (Color color : {Color::O, Color::E}) {
        std::vector<std::size_t> writer(lattice.size(), kNone);
        for (std::size_t m = 0; m < cell_sites.size(); ++m) {
            if (colors[m] != color)
                continue;
            for (Site z : dilate(lattice, cell_sites[m], update_radius)) {
                if (writer[z] != kNone && writer[z] != m)
                    throw PartitionError("cells " + std::to_string(writer[z]) + " and " + std::to_string(m) +
                                         " of color " + color_name(color) + " both write site " + std::to_string(z));
                writer[z] = m;
            }
        }
        for (std::size_t m = 0; m < cell_sites.size(); ++m) {
            if (colors[m] != color)
                continue;
            for (Site z : dilate(lattice, cell_sites[m], interaction_range)) {
                if (writer[z] != kNone && writer[z] != m)
                    throw PartitionError("cell " + std::to_string(m) + " reads site " + std::to_string(z) +
                                         " written by same-color cell " + std::to_string(writer[z]) +
                                         "; cells are too small for interaction range " +
                                         std::to_string(interaction_range));
            }
        }
    }
}

void Partition::add_cell(Tile tile, std::vector<int> grid, Color color)
{
    Cell c;
    c.id = cells_.size();
    c.sites = tile_sites(lattice_, tile);
    c.tile = std::move(tile);
    c.grid = std::move(grid);
    c.color = color;
    cells_.push_back(std::move(c));
}

void Partition::finalize()
{
    owner_.assign(lattice_.size(), static_cast<std::size_t>(-1));
    for (const auto& c : cells_) {
        for (Site x : c.sites) {
            if (owner_[x] != static_cast<std::size_t>(-1))
                throw PartitionError("cells " + std::to_string(owner_[x]) + " and " + std::to_string(c.id) +
                                     " overlap at site " + std::to_string(x));
            owner_[x] = c.id;
        }
    }
    for (std::size_t x = 0; x < owner_.size(); ++x)
        if (owner_[x] == static_cast<std::size_t>(-1))
            throw PartitionError("site " + std::to_string(x) + " is not covered by any cell");

    const int edge = range_ + update_radius_;
    for (auto& c : cells_) {
        c.closure = dilate(lattice_, c.sites, range_);
        c.boundary.clear();
        c.interior.clear();
        for (Site x : c.sites) {
            bool touches = false;
            lattice_.for_each_in_ball(x, edge, [&](Site z) { touches = touches || owner_[z] != c.id; });
            (touches ? c.boundary : c.interior).push_back(x);
        }
        (c.color == Color::O ? o_cells_ : e_cells_).push_back(c.id);
    }
    if (o_cells_.empty() || e_cells_.empty())
        throw PartitionError("partition needs cells of both colors");

    std::vector<std::vector<Site>> sites;
    std::vector<Color> colors;
    for (const auto& c : cells_) {
        sites.push_back(c.sites);
        colors.push_back(c.color);
    }
    check_independence(lattice_, sites, colors, range_, update_radius_);
}

Partition Partition::build(const Lattice& lattice, const std::vector<int>& cell_extent, int interaction_range,
                           int update_radius)
{
    const auto d = static_cast<std::size_t>(lattice.dimension());
    if (cell_extent.size() != d)
        throw PartitionError("cell extent " + axis_list(cell_extent) + " does not match lattice dimension " +
                             std::to_string(d));
    if (interaction_range < 0 || update_radius < 0 || update_radius > interaction_range)
        throw PartitionError("need 0 <= update radius <= interaction range");

    std::vector<int> counts(d);
    bool split = false;
    for (std::size_t a = 0; a < d; ++a) {
        const int dim = lattice.dims()[a];
        const int ext = cell_extent[a];
        if (ext < 1 || dim % ext != 0)
            throw PartitionError("lattice extent " + std::to_string(dim) + " on axis " + std::to_string(a) +
                                 " is not divisible by cell extent " + std::to_string(ext));
        counts[a] = dim / ext;
        if (counts[a] > 1 && ext <= interaction_range)
            throw PartitionError("cell extent " + std::to_string(ext) + " on axis " + std::to_string(a) +
                                 " must exceed the interaction range " + std::to_string(interaction_range));
        if (counts[a] > 1 && counts[a] % 2 != 0)
            throw PartitionError("axis " + std::to_string(a) + " has an odd number of cells (" +
                                 std::to_string(counts[a]) + "); the checkerboard cannot close periodically");
        split = split || counts[a] > 1;
    }
    if (!split)
        throw PartitionError("a single cell covers the lattice; no opposite color exists");

    Partition p(lattice, interaction_range, update_radius);
    std::vector<int> g(d, 0);
    for (;;) {
        Tile t;
        t.origin.resize(d);
        t.extent = cell_extent;
        int parity = 0;
        for (std::size_t a = 0; a < d; ++a) {
            t.origin[a] = g[a] * cell_extent[a];
            parity += g[a];
        }
        p.add_cell(std::move(t), g, parity % 2 == 0 ? Color::O : Color::E);
        // Last axis fastest, so cell ids follow the row-major tile order.
        std::size_t a = d;
        while (a-- > 0) {
            if (++g[a] < counts[a])
                break;
            g[a] = 0;
            if (a == 0) {
                p.finalize();
                return p;
            }
        }
    }
}

Partition Partition::strips(const Lattice& lattice, const std::vector<int>& boundaries, int interaction_range,
                            int update_radius)
{
    const int n0 = lattice.extent(0);
    if (boundaries.empty() || boundaries.front() != 0)
        throw PartitionError("strip boundaries must start at 0");
    if (boundaries.size() % 2 != 0)
        throw PartitionError("strip count " + std::to_string(boundaries.size()) + " is odd");
    if (interaction_range < 0 || update_radius < 0 || update_radius > interaction_range)
        throw PartitionError("need 0 <= update radius <= interaction range");

    Partition p(lattice, interaction_range, update_radius);
    const auto d = static_cast<std::size_t>(lattice.dimension());
    for (std::size_t m = 0; m < boundaries.size(); ++m) {
        const int lo = boundaries[m];
        const int hi = m + 1 < boundaries.size() ? boundaries[m + 1] : n0;
        if (hi - lo <= interaction_range)
            throw PartitionError("strip " + std::to_string(m) + " has width " + std::to_string(hi - lo) +
                                 ", which must exceed the interaction range " + std::to_string(interaction_range));
        Tile t;
        t.origin.assign(d, 0);
        t.extent.assign(lattice.dims().begin(), lattice.dims().end());
        t.origin[0] = lo;
        t.extent[0] = hi - lo;
        std::vector<int> grid(d, 0);
        grid[0] = static_cast<int>(m);
        p.add_cell(std::move(t), std::move(grid), m % 2 == 0 ? Color::O : Color::E);
    }
    p.strip_bounds_ = boundaries;
    p.finalize();
    return p;
}

std::vector<Site> Partition::sites_of(Color c) const
{
    std::vector<Site> out;
    for (std::size_t m : cells_of(c))
        out.insert(out.end(), cells_[m].sites.begin(), cells_[m].sites.end());
    std::sort(out.begin(), out.end());
    return out;
}

NestedPartition::NestedPartition(Partition outer, const std::vector<int>& inner_extent) : outer_(std::move(outer))
{
    const Lattice& lat = outer_.lattice();
    const auto d = static_cast<std::size_t>(lat.dimension());
    const int range = outer_.interaction_range();
    if (inner_extent.size() != d)
        throw PartitionError("inner extent " + axis_list(inner_extent) + " does not match lattice dimension");

    for (const auto& cell : outer_.cells()) {
        std::vector<int> counts(d);
        bool split = false;
        for (std::size_t a = 0; a < d; ++a) {
            const int ext = cell.tile.extent[a];
            if (inner_extent[a] < 1 || ext % inner_extent[a] != 0)
                throw PartitionError("cell extent " + std::to_string(ext) + " on axis " + std::to_string(a) +
                                     " is not divisible by inner extent " + std::to_string(inner_extent[a]));
            counts[a] = ext / inner_extent[a];
            if (counts[a] > 1 && inner_extent[a] <= range)
                throw PartitionError("inner extent " + std::to_string(inner_extent[a]) +
                                     " must exceed the interaction range " + std::to_string(range));
            if (counts[a] > 1 && counts[a] % 2 != 0)
                throw PartitionError("inner tiling has an odd tile count on axis " + std::to_string(a));
            split = split || counts[a] > 1;
        }
        if (!split)
            throw PartitionError("inner tile equals the whole cell " + std::to_string(cell.id));

        std::vector<InnerTile> tiles;
        std::vector<int> g(d, 0);
        bool done = false;
        while (!done) {
            InnerTile it;
            it.tile.origin.resize(d);
            it.tile.extent = inner_extent;
            int parity = 0;
            for (std::size_t a = 0; a < d; ++a) {
                it.tile.origin[a] = cell.tile.origin[a] + g[a] * inner_extent[a];
                parity += g[a];
            }
            it.color = parity % 2 == 0 ? Color::O : Color::E;
            it.sites = tile_sites(lat, it.tile);
            tiles.push_back(std::move(it));
            std::size_t a = d;
            for (;;) {
                if (a-- == 0) {
                    done = true;
                    break;
                }
                if (++g[a] < counts[a])
                    break;
                g[a] = 0;
            }
        }

        std::vector<std::vector<Site>> sites;
        std::vector<Color> colors;
        std::vector<std::size_t> o, e;
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            sites.push_back(tiles[i].sites);
            colors.push_back(tiles[i].color);
            (tiles[i].color == Color::O ? o : e).push_back(i);
        }
        check_independence(lat, sites, colors, range, outer_.update_radius());
        inner_.push_back(std::move(tiles));
        inner_o_.push_back(std::move(o));
        inner_e_.push_back(std::move(e));
    }
}

NestedPartition nested_partition(Partition partition, const std::vector<int>& inner_extent)
{
    return NestedPartition(std::move(partition), inner_extent);
}

}  // namespace fskmc
