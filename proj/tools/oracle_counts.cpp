// Independent hand-count formulas for the spin graphs of flat surfaces.
//
// A flat rows x cols surface tiles the rectangle [0, 2*rows] x [0, 2*cols]
// with 2x2 blocks. Corner formulation: spin sites are the block corners
// (even-even points) plus one centre per block; each block contributes four
// centre-corner edges. Midpoint formulation: spin sites are the block side
// midpoints; each block contributes four midpoint-midpoint edges; interior
// sites are the midpoints of sides shared by two blocks.

#include <cstdio>

namespace {

void corner_counts(int rows, int cols) {
    const int corners = (rows + 1) * (cols + 1);
    const int centers = rows * cols;
    const int interior = (rows - 1) * (cols - 1);
    const int boundary = corners - interior;
    const int edges = 4 * rows * cols;
    std::printf("irf %dx%d: corners %d (interior %d, boundary %d), centers %d, "
                "graph vertices %d, edges %d\n",
                rows, cols, corners, interior, boundary, centers, corners + centers, edges);
}

void midpoint_counts(int rows, int cols) {
    const int horizontal = rows * (cols + 1);
    const int vertical = (rows + 1) * cols;
    const int sites = horizontal + vertical;
    const int interior = rows * (cols - 1) + (rows - 1) * cols;
    const int boundary = sites - interior;
    const int edges = 4 * rows * cols;
    std::printf("vertex %dx%d: sites %d (interior %d, boundary %d), edges %d\n", rows, cols,
                sites, interior, boundary, edges);
}

}  // namespace

int main() {
    std::printf("flat surface spin-graph counts\n\n");
    corner_counts(2, 2);
    corner_counts(2, 3);
    corner_counts(3, 3);
    midpoint_counts(2, 2);
    midpoint_counts(2, 3);
    midpoint_counts(3, 3);
    return 0;
}
