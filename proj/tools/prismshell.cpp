#include <cstdio>

int main() {
  std::puts("prismshell: cli under construction");
  return 1;
}
