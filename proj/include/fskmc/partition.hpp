#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fskmc/lattice.hpp"

namespace fskmc {

class PartitionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sub-lattice label. O is group 1 and E is group 2 of the communication schedule.
enum class Color : std::uint8_t { O = 0, E = 1 };

inline Color opposite(Color c) noexcept { return c == Color::O ? Color::E : Color::O; }
inline char color_name(Color c) noexcept { return c == Color::O ? 'O' : 'E'; }

/// Axis-aligned box of sites (origin and extent per axis, wrapped periodically).
struct Tile {
    std::vector<int> origin;
    std::vector<int> extent;
};

struct Cell {
    std::size_t id = 0;
    Tile tile;
    std::vector<int> grid;  ///< tile coordinates in the tiling
    Color color = Color::O;
    std::vector<Site> sites;     ///< ascending
    std::vector<Site> closure;   ///< sites within L of the cell, ascending
    std::vector<Site> boundary;  ///< cell sites interacting across the cell edge
    std::vector<Site> interior;  ///< cell sites minus boundary
};

/**
 * Non-overlapping checkerboard tiling of the lattice into cells.
 *
 * Cells of one color must evolve independently: no cell may write (within
 * the model's update radius W) a site that another same-color cell reads
 * (within the interaction range L). This is verified exhaustively when the
 * partition is built.
 */
class Partition {
public:
    /// Uniform tiles of `cell_extent`. Each axis needs an even tile count or a
    /// single tile, at least one axis must be split, and extents must exceed L.
    static Partition build(const Lattice& lattice, const std::vector<int>& cell_extent, int interaction_range,
                           int update_radius = 0);

    /// Variable-width strips along axis 0; `boundaries` are the strip start
    /// offsets (ascending, first = 0). Requires an even strip count.
    static Partition strips(const Lattice& lattice, const std::vector<int>& boundaries, int interaction_range,
                            int update_radius = 0);

    const Lattice& lattice() const noexcept { return lattice_; }
    const std::vector<Cell>& cells() const noexcept { return cells_; }
    std::size_t num_cells() const noexcept { return cells_.size(); }
    const std::vector<std::size_t>& cells_of(Color c) const noexcept
    {
        return c == Color::O ? o_cells_ : e_cells_;
    }
    int interaction_range() const noexcept { return range_; }
    int update_radius() const noexcept { return update_radius_; }
    std::size_t owner(Site x) const { return owner_.at(x); }

    /// Strip start offsets for strip partitions (empty otherwise).
    const std::vector<int>& strip_boundaries() const noexcept { return strip_bounds_; }

    /// Sites of all cells of one color.
    std::vector<Site> sites_of(Color c) const;

private:
    Partition(const Lattice& lattice, int range, int update_radius) :
        lattice_(lattice), range_(range), update_radius_(update_radius)
    {}

    void add_cell(Tile tile, std::vector<int> grid, Color color);
    void finalize();

    Lattice lattice_;
    int range_;
    int update_radius_;
    std::vector<Cell> cells_;
    std::vector<std::size_t> o_cells_, e_cells_;
    std::vector<std::size_t> owner_;
    std::vector<int> strip_bounds_;
};

/// Sites of a tile (wrapped), ascending.
std::vector<Site> tile_sites(const Lattice& lattice, const Tile& tile);

/// Union of L-balls around `sites`, ascending.
std::vector<Site> dilate(const Lattice& lattice, const std::vector<Site>& sites, int radius);

/// Verifies that same-color cells of `cells` (given as site lists with
/// colors) never write what another reads. Throws PartitionError.
void check_independence(const Lattice& lattice, const std::vector<std::vector<Site>>& cell_sites,
                        const std::vector<Color>& colors, int interaction_range, int update_radius);

/// A tile inside an outer cell of a nested partition.
struct InnerTile {
    Tile tile;
    Color color = Color::O;
    std::vector<Site> sites;
};

/**
 * Two-level decomposition: every outer cell is itself tiled with an inner
 * checkerboard. An outer sub-step of a cell runs an inner Lie schedule over
 * its inner tiles.
 */
class NestedPartition {
public:
    NestedPartition(Partition outer, const std::vector<int>& inner_extent);

    const Partition& outer() const noexcept { return outer_; }
    const std::vector<InnerTile>& inner(std::size_t cell) const { return inner_.at(cell); }
    const std::vector<std::size_t>& inner_of(std::size_t cell, Color c) const
    {
        return c == Color::O ? inner_o_.at(cell) : inner_e_.at(cell);
    }

private:
    Partition outer_;
    std::vector<std::vector<InnerTile>> inner_;
    std::vector<std::vector<std::size_t>> inner_o_, inner_e_;
};

NestedPartition nested_partition(Partition partition, const std::vector<int>& inner_extent);

}  // namespace fskmc
