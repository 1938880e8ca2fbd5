#include <cstdio>
struct Node { int v }
int main() {
  Node n;
  n.v = 0;
  scanf("%d", &n.v);
  printf("%d\n", n.v + 5);
  return 0;
}
