#pragma once

#include <array>

// Tabulated on 380-720 nm at 5 nm (69 samples).

namespace finsim::tables {

inline constexpr int kSamples = 69;

// CIE 1931 2-degree standard observer colour matching functions (x, y, z).
inline constexpr std::array<std::array<double, 3>, kSamples> kCie1931 = {{
    {0.001368, 3.9e-05, 0.00645}, // 380
    {0.002236, 6.4e-05, 0.01055}, // 385
    {0.004243, 0.00012, 0.02005}, // 390
    {0.00765, 0.000217, 0.03621}, // 395
    {0.01431, 0.000396, 0.06785}, // 400
    {0.02319, 0.00064, 0.1102}, // 405
    {0.04351, 0.00121, 0.2074}, // 410
    {0.07763, 0.00218, 0.3713}, // 415
    {0.13438, 0.004, 0.6456}, // 420
    {0.21477, 0.0073, 1.03905}, // 425
    {0.2839, 0.0116, 1.3856}, // 430
    {0.3285, 0.01684, 1.62296}, // 435
    {0.34828, 0.023, 1.74706}, // 440
    {0.34806, 0.0298, 1.7826}, // 445
    {0.3362, 0.038, 1.77211}, // 450
    {0.3187, 0.048, 1.7441}, // 455
    {0.2908, 0.06, 1.6692}, // 460
    {0.2511, 0.0739, 1.5281}, // 465
    {0.19536, 0.09098, 1.28764}, // 470
    {0.1421, 0.1126, 1.0419}, // 475
    {0.09564, 0.13902, 0.81295}, // 480
    {0.05795, 0.1693, 0.6162}, // 485
    {0.03201, 0.20802, 0.46518}, // 490
    {0.0147, 0.2586, 0.3533}, // 495
    {0.0049, 0.323, 0.272}, // 500
    {0.0024, 0.4073, 0.2123}, // 505
    {0.0093, 0.503, 0.1582}, // 510
    {0.0291, 0.6082, 0.1117}, // 515
    {0.06327, 0.71, 0.07825}, // 520
    {0.1096, 0.7932, 0.05725}, // 525
    {0.1655, 0.862, 0.04216}, // 530
    {0.22575, 0.91485, 0.02984}, // 535
    {0.2904, 0.954, 0.0203}, // 540
    {0.3597, 0.9803, 0.0134}, // 545
    {0.43345, 0.99495, 0.00875}, // 550
    {0.51205, 1, 0.00575}, // 555
    {0.5945, 0.995, 0.0039}, // 560
    {0.6784, 0.9786, 0.00275}, // 565
    {0.7621, 0.952, 0.0021}, // 570
    {0.8425, 0.9154, 0.0018}, // 575
    {0.9163, 0.87, 0.00165}, // 580
    {0.9786, 0.8163, 0.0014}, // 585
    {1.0263, 0.757, 0.0011}, // 590
    {1.0567, 0.6949, 0.001}, // 595
    {1.0622, 0.631, 0.0008}, // 600
    {1.0456, 0.5668, 0.0006}, // 605
    {1.0026, 0.503, 0.00034}, // 610
    {0.9384, 0.4412, 0.00024}, // 615
    {0.85445, 0.381, 0.00019}, // 620
    {0.7514, 0.321, 0.0001}, // 625
    {0.6424, 0.265, 5e-05}, // 630
    {0.5419, 0.217, 3e-05}, // 635
    {0.4479, 0.175, 2e-05}, // 640
    {0.3608, 0.1382, 1e-05}, // 645
    {0.2835, 0.107, 0}, // 650
    {0.2187, 0.0816, 0}, // 655
    {0.1649, 0.061, 0}, // 660
    {0.1212, 0.04458, 0}, // 665
    {0.0874, 0.032, 0}, // 670
    {0.0636, 0.0232, 0}, // 675
    {0.04677, 0.017, 0}, // 680
    {0.0329, 0.01192, 0}, // 685
    {0.0227, 0.00821, 0}, // 690
    {0.01584, 0.005723, 0}, // 695
    {0.0113592, 0.004102, 0}, // 700
    {0.00811092, 0.002929, 0}, // 705
    {0.00579035, 0.002091, 0}, // 710
    {0.00410946, 0.001484, 0}, // 715
    {0.00289933, 0.001047, 0}, // 720
}};

// ColorChecker 'red' patch reflectance, BabelColor average.
inline constexpr std::array<double, kSamples> kColorCheckerRed = {
    0.0500, 0.0495, 0.0490, 0.0485, 0.0480, 0.0474, 0.0470, 0.0469,
    0.0470, 0.0470, 0.0470, 0.0470, 0.0470, 0.0471, 0.0470, 0.0466,
    0.0460, 0.0455, 0.0450, 0.0444, 0.0440, 0.0439, 0.0440, 0.0444,
    0.0450, 0.0455, 0.0460, 0.0465, 0.0470, 0.0475, 0.0480, 0.0485,
    0.0490, 0.0493, 0.0500, 0.0517, 0.0540, 0.0567, 0.0600, 0.0646,
    0.0720, 0.0842, 0.1040, 0.1339, 0.1780, 0.2390, 0.3120, 0.3911,
    0.4670, 0.5307, 0.5810, 0.6180, 0.6440, 0.6624, 0.6750, 0.6838,
    0.6900, 0.6943, 0.6980, 0.7018, 0.7060, 0.7104, 0.7150, 0.7197,
    0.7240, 0.7274, 0.7300, 0.7321, 0.7340,
};

// ColorChecker 'green' patch reflectance, BabelColor average.
inline constexpr std::array<double, kSamples> kColorCheckerGreen = {
    0.0520, 0.0525, 0.0530, 0.0535, 0.0540, 0.0544, 0.0550, 0.0559,
    0.0570, 0.0580, 0.0590, 0.0598, 0.0610, 0.0631, 0.0660, 0.0697,
    0.0750, 0.0826, 0.0930, 0.1067, 0.1250, 0.1489, 0.1780, 0.2113,
    0.2460, 0.2791, 0.3070, 0.3265, 0.3370, 0.3385, 0.3340, 0.3266,
    0.3170, 0.3059, 0.2930, 0.2780, 0.2620, 0.2460, 0.2300, 0.2141,
    0.1980, 0.1815, 0.1650, 0.1491, 0.1350, 0.1237, 0.1150, 0.1086,
    0.1040, 0.1006, 0.0980, 0.0958, 0.0940, 0.0927, 0.0920, 0.0921,
    0.0930, 0.0948, 0.0970, 0.0994, 0.1020, 0.1050, 0.1080, 0.1108,
    0.1130, 0.1144, 0.1150, 0.1146, 0.1140,
};

}  // namespace finsim::tables
