// Placeholder entry point; the experiment subcommands land with the
// experiments module.
#include <cstdio>

int main() {
  std::puts("cvxlab: experiments not wired up yet");
  return 1;
}
