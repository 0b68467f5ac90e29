#pragma once

// Reference implementations used only by the tests. They favour the most
// direct formulation over speed, and share no code with the library beyond
// its data types.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "specgraph/graph.hpp"
#include "specgraph/image.hpp"
#include "specgraph/matrix.hpp"

namespace oracle {

using specgraph::BinaryImage;
using specgraph::GrayImage;
using specgraph::SquareMatrix;

/// Dense 2D convolution with the (2r+1)^2 Gaussian window, normalized over
/// the window, borders replicated.
GrayImage dense_gaussian_blur(const GrayImage& img, double sigma, int radius);

/// Center weight of the normalized 2D window.
double gaussian_window_center(double sigma, int radius);

/// Otsu by exhaustive search: every level k in [0, 256] splits the pixels
/// into {bin < k} and {bin >= k}; the between-class variance is computed
/// from the raw pixel values. Returns the first maximizing level (0 when
/// every split leaves a class empty).
int exhaustive_otsu_level(const GrayImage& img);

/// Characteristic polynomial coefficients of det(lambda I - A) by the
/// Faddeev-LeVerrier recursion, highest degree first (leading 1).
std::vector<double> charpoly(const SquareMatrix& a);

/// All complex roots by Durand-Kerner iteration.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& monic);

/// Real parts of the characteristic roots, sorted descending.
std::vector<double> charpoly_eigenvalues(const SquareMatrix& a);

/// Maximizes sum(a) - 1/2 a'Qa subject to 0 <= a <= C and sum a_i y_i = 0 by
/// enumerating every assignment of each variable to {0, C, free} and solving
/// the free block's KKT system. Meant for at most ~9 variables.
struct QpResult {
    std::vector<double> alpha;
    double objective = 0.0;
};
QpResult brute_force_svm_dual(const SquareMatrix& kernel, std::span<const int> y, double C);

/// Per-class tallies straight from the label sequences.
struct Tally {
    std::vector<double> precision, recall, f;
    double macro_f = 0.0;
};
Tally tally_prf(std::span<const std::size_t> actual, std::span<const std::size_t> predicted, std::size_t classes);

// ---- fixtures -------------------------------------------------------------

void draw_line(BinaryImage& img, int x0, int y0, int x1, int y1);
BinaryImage line_image(int w, int h, int x0, int y0, int x1, int y1);
/// Horizontal and vertical 1-px strokes crossing at the center.
BinaryImage plus_image(int size);
/// Midpoint-circle ring.
BinaryImage ring_image(int size, int radius);
BinaryImage filled_rect(int w, int h, int x0, int y0, int rw, int rh);
/// Union of random discs, ellipses and thick strokes.
BinaryImage random_blob(std::mt19937_64& rng, int w, int h);

/// Graph with random coordinates (all distinct) and random edge subset,
/// weighted by Euclidean distance.
specgraph::NumeralGraph random_graph(std::mt19937_64& rng, std::size_t nodes, double edge_probability);

/// Random symmetric matrix with entries uniform in [-scale, scale].
SquareMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, double scale);

/// The five-node, seven-edge worked example with w(1,5) = 1.
specgraph::NumeralGraph worked_example_graph();
SquareMatrix worked_example_adjacency();

}  // namespace oracle
