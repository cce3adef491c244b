#include <cstdio>
int main() { std::puts("qtilt: not wired up yet"); return 1; }
