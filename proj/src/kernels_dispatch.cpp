#include <cstdlib>
#include <string_view>

#include "ewls/kernels.hpp"

namespace ewls::kernels {

#ifndef EWLS_HAVE_AVX2
const Table* avx2_table() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table& table_for(Isa isa) {
  if (isa == Isa::avx2 && avx2_table() && cpu_has_avx2()) return *avx2_table();
  return scalar_table();
}

const Table& active() {
  static const Table& t = [] () -> const Table& {
    const char* force = std::getenv("EWLS_FORCE_SCALAR");
    if (force && *force && std::string_view(force) != "0") return scalar_table();
    return table_for(Isa::avx2);
  }();
  return t;
}

}  // namespace ewls::kernels
