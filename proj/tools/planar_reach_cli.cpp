#include <cstdio>

int main() {
  std::puts("planar-reach: subcommands not wired up yet");
  return 1;
}
