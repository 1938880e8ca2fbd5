#include <cstdio>
int main() {
  int new = 0, old = 0;
  scanf("%d %d", &old, &new);
  printf("%d\n", new - old);
  return 0;
}
