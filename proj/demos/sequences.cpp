// Prints the five cover sequences next to their growth estimators.
#include <cstdlib>
#include <iostream>

#include "cover_census/cover_census.hpp"

int main(int argc, char** argv) {
  using namespace cover_census;
  const std::size_t max_n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 12;

  const SequenceTable table = full_table(max_n);
  for (const auto& row : table.rows) {
    std::cout << "n=" << row.n << "  s=" << row.s << "  t=" << row.t << "  u=" << row.u << "  v=" << row.v
              << "  l=" << row.l << '\n';
  }

  std::cout << "\nt_n / estimate and v_n / estimate\n";
  const AsymptoticReport report = build_asymptotic_report(max_n, &table);
  for (const auto& row : report.rows)
    std::cout << "n=" << row.n << "  " << *row.ratio_t << "  " << *row.ratio_v << '\n';
}
