#include "kqse/seeding.hpp"

namespace kqse {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t setting_index,
                          std::uint64_t repetition, Stream stream) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ setting_index);
  h = splitmix64(h ^ (repetition * 0xd1b54a32d192ed03ULL));
  return splitmix64(h ^ static_cast<std::uint64_t>(stream));
}

}  // namespace kqse
