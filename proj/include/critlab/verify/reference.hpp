#pragma once

// Displayed coefficient tables, used as frozen expectations.

#include <array>
#include <string>
#include <vector>

namespace critlab::reference {

// det Lambda, coefficients of t^8..t^12.
inline const std::array<const char*, 5> kDetLambdaDisplay = {"1/6480", "1/3888", "869/4082400", "37/326592",
                                                             "1213/29393280"};
// det A, coefficients of t^1..t^4.
inline const std::array<const char*, 4> kDetADisplay = {"3", "-1/2", "1/6", "1/24"};

// Vanishing orders of e1 + F3, e2 - F2, e3 + F1, e4 - F0 at the default order.
inline constexpr std::array<int, 4> kSymmetricOrders = {21, 21, 24, 28};

// y_ij through t^3, row-major, coefficient strings for t^0..t^3.
inline const std::array<std::array<std::array<const char*, 4>, 4>, 4> kYDisplay = {{
    {{{"0", "0", "30", "9"}, {"0", "360", "0", "-18/7"}, {"0", "0", "-30", "9"}, {"0", "-360", "180", "-318/7"}}},
    {{{"0", "360", "0", "-18/7"}, {"4320", "-1080", "960/7", "-72/7"}, {"0", "-360", "180", "-318/7"},
      {"-4320", "3240", "-8520/7", "2148/7"}}},
    {{{"0", "0", "-30", "9"}, {"0", "-360", "180", "-318/7"}, {"0", "0", "30", "-21"}, {"0", "360", "-360", "1242/7"}}},
    {{{"0", "-360", "180", "-318/7"}, {"-4320", "3240", "-8520/7", "2148/7"}, {"0", "360", "-360", "1242/7"},
      {"4320", "-5400", "23640/7", "-9852/7"}}},
}};

// Eigenvalue expansions through t^11, coefficient strings for t^0..t^11.
inline const std::array<std::array<const char*, 12>, 4> kLambdaDisplay = {{
    {{"8640", "-6480", "25020/7", "-10050/7", "66380/147", "-261767/2352", "48960935/2173248",
      "-29628553/8149680", "208429618963/427173626880", "-560822276587/8543472537600",
      "46335059891/6133775155200", "518190034231/1794129232896000"}},
    {{"0", "0", "0", "6", "-3", "111/80", "-161/960", "-20561/1209600", "561019/21772800",
      "3916753/15676416000", "-827998967/282175488000", "5185091420987/15643809054720000"}},
    {{"0", "0", "0", "0", "1/3", "-1/12", "1/72", "1/32", "6223/207360", "256685/8957952",
      "588107563/22574039040", "6399891227/325066162176"}},
    {{"0", "0", "0", "0", "0", "3/8", "-1/16", "-65/768", "-101/3072", "-877/40960", "-37303/1474560",
      "-2563021/123863040"}},
}};

// Eigenvector matrix (rows are eigenvectors), coefficients for t^0..t^2.
// Row 3, column 2 has no constant term; its display shows one by mistake.
inline const std::array<std::array<std::array<const char*, 3>, 4>, 4> kUDisplay = {{
    {{{"0", "-1/24 sqrt2", "-1/48 sqrt2"}, {"-1/2 sqrt2", "-1/8 sqrt2", "5/288 sqrt2"},
      {"0", "1/24 sqrt2", "0"}, {"1/2 sqrt2", "-1/8 sqrt2", "-5/288 sqrt2"}}},
    {{{"-1/2", "-3/16", "-65/2304"}, {"1/2", "-3/16", "5/256"}, {"-1/2", "1/16", "167/2304"},
      {"1/2", "1/16", "-41/768"}}},
    {{{"1/2 sqrt2", "0", "43/576 sqrt2"}, {"0", "1/12 sqrt2", "61/576 sqrt2"}, {"-1/2 sqrt2", "0", "7/64 sqrt2"},
      {"0", "1/6 sqrt2", "109/576 sqrt2"}}},
    {{{"1/2", "-3/16", "-193/768"}, {"1/2", "-1/16", "-53/768"}, {"1/2", "1/16", "215/768"},
      {"1/2", "3/16", "-29/768"}}},
}};

// Lower triangle of Ut Ut^T - I: (i, j, t^3 coefficient, t^4 coefficient), 1-based.
struct DefectEntry {
    int i, j;
    const char* c3;
    const char* c4;
};
inline const std::array<DefectEntry, 10> kUUDefect = {{
    {1, 1, "1/288", "43/20736"},
    {2, 1, "221/27648 sqrt2", "205/110592 sqrt2"},
    {3, 1, "-85/1152", "-83/13824"},
    {4, 1, "323/9216 sqrt2", "173/36864 sqrt2"},
    {2, 2, "13/2304", "12317/1327104"},
    {3, 2, "-23/1024 sqrt2", "-367/165888 sqrt2"},
    {4, 2, "85/1152", "517/18432"},
    {3, 3, "31/192", "595/4608"},
    {4, 3, "89/9216 sqrt2", "-287/110592 sqrt2"},
    {4, 4, "95/768", "21781/147456"},
}};

}  // namespace critlab::reference
