#pragma once

// Per-port capacities of the bundled dataset, typed in from the published
// tables independently of data/mkarns/make_dataset.py.

#include <array>

namespace tables {

// Processing (ton/month): crane/conveyor/hopper/forklift, crane/forklift, petroleum tank, chemical tank.
inline constexpr std::array<std::array<double, 4>, 30> kProcessing{{
    {32400, 0, 0, 7624}, {34425, 0, 0, 0}, {30375, 0, 0, 0}, {30000, 0, 0, 0}, {0, 150000, 0, 7624},
    {0, 0, 0, 0}, {30000, 0, 0, 0}, {50250, 9300, 0, 0}, {30000, 0, 0, 0}, {0, 210000, 0, 0},
    {30000, 0, 0, 0}, {30375, 0, 0, 0}, {38700, 200700, 0, 0}, {0, 0, 38120, 0}, {129300, 21600, 7624, 0},
    {0, 0, 0, 22872}, {105000, 0, 0, 0}, {0, 58500, 0, 0}, {26250, 0, 0, 0}, {52500, 0, 0, 0},
    {30000, 0, 0, 0}, {26250, 0, 0, 0}, {4050, 0, 0, 0}, {52500, 0, 0, 0}, {15000, 0, 0, 0},
    {0, 90000, 0, 0}, {76650, 30000, 0, 0}, {20250, 0, 0, 0}, {34425, 0, 0, 0}, {105000, 0, 0, 0},
}};

// Storage (ton): grain elevator, unpaved, paved, warehouse, chemical tank, petroleum tank.
inline constexpr std::array<std::array<double, 6>, 30> kStorage{{
    {118800, 18687, 0, 4182, 0, 3600}, {15984, 0, 0, 0, 0, 0}, {61992, 0, 0, 0, 0, 0}, {11556, 0, 0, 0, 0, 0},
    {0, 0, 0, 15410, 0, 0}, {0, 0, 0, 0, 0, 26250}, {11214, 0, 0, 0, 0, 0}, {324, 0, 0, 48956, 0, 0},
    {0, 176380, 0, 0, 0, 0}, {0, 115352, 0, 3679, 0, 0}, {0, 0, 0, 4594, 0, 0}, {113400, 0, 0, 0, 0, 0},
    {0, 143749, 191602, 5906, 0, 0}, {0, 0, 0, 0, 29700, 0}, {56700, 0, 5748048, 10731, 7950, 0},
    {0, 0, 0, 0, 0, 27300}, {0, 261766, 0, 0, 0, 0}, {0, 9793, 45646, 0, 0, 0}, {0, 48243, 0, 0, 0, 0},
    {0, 50614, 188185, 0, 0, 0}, {13500, 0, 0, 1254, 0, 0}, {0, 0, 316559, 0, 0, 0}, {17550, 0, 0, 10073, 0, 0},
    {0, 1069815, 0, 0, 0, 0}, {0, 0, 1322985, 4534, 0, 0}, {0, 0, 0, 10047, 0, 0}, {0, 0, 492369, 13922, 0, 0},
    {22950, 0, 0, 0, 0, 0}, {0, 125172, 0, 0, 0, 0}, {0, 0, 0, 25988, 0, 0},
}};

}  // namespace tables
