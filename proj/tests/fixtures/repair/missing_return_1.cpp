#include <cstdio>
void main() {
  int n = 0;
  scanf("%d", &n);
  printf("%d\n", n * 2);
}
