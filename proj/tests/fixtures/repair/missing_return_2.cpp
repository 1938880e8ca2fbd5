#include <cstdio>
main() {
  int n = 0;
  if (scanf("%d", &n) != 1) return;
  printf("%d\n", n + 1);
}
