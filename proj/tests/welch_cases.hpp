#pragma once

// Frozen reference values (t, Welch-Satterthwaite df, two-sided p) computed
// once with an independent statistical package and pinned here.

#include <vector>

namespace revtest {

struct WelchCase {
  std::vector<double> a, b;
  double t, df, p;
};

inline const std::vector<WelchCase> kWelchCases = {
    {{1.0, 2.0, 3.0, 4.0, 5.0},
     {2.0, 4.0, 6.0, 8.0, 10.0},
     -1.8973665961010275, 5.882352941176471, 0.10753119493062718},
    {{1.0, 2.0}, {3.0, 4.0},
     -2.8284271247461898, 2, 0.10557280900008414},
    {{0.5, 1.5, 2.5, 3.5, 4.5, 5.5}, {1.0, 1.1, 1.2},
     2.4806065973686948, 5.0568933148314423, 0.055251012211646709},
    {{10.0, 12.0, 9.0, 11.0, 13.0, 10.0, 12.0}, {8.0, 7.0, 9.0, 6.0, 8.0},
     4.60252605351653, 9.7623263385589709, 0.0010396277320686815},
    {{-3.2, -1.1, 0.4, 2.2, 5.9}, {-0.5, 0.1, 0.3, 0.2, -0.1, 0.05},
     0.53683821426246603, 4.0449508631035052, 0.61954827277455027},
    {{100.0, 101.0, 99.5, 100.5}, {100.2, 100.1, 99.9, 100.0, 100.3},
     0.45398994507476098, 3.2892282136468096, 0.67813804256835652},
    {{0.001, 0.002, 0.0015, 0.0025}, {0.01, 0.02, 0.015},
     -4.5615137188665127, 2.050098948026247, 0.042808252848851973},
    {{55.0, 47.0, 60.0, 52.0, 58.0, 49.0, 51.0, 56.0},
     {50.0, 48.0, 53.0, 46.0, 44.0, 52.0},
     2.1845305932953818, 11.962288199982838, 0.049558565297207036},
    {{1.882, 2.166, 0.846, 0.735, 1.5, 2.0}, {0.0071, 0.24, 0.694, 0.339},
     4.194875037159763, 7.4880798984006649, 0.0034956725972353736},
    {{7.0, 7.0, 7.0, 7.0, 8.0}, {7.0, 7.0, 7.0, 7.0, 7.0, 9.0},
     -0.34299717028501647, 7.9586919104991374, 0.74048433312683803},
    {{2.5, 3.5, 2.0, 4.0, 3.0, 2.8, 3.3}, {2.6, 3.4, 2.1, 3.9, 3.1, 2.7, 3.2},
     0.042666009299144249, 11.83930066028085, 0.96667889317337918},
};

}  // namespace revtest
