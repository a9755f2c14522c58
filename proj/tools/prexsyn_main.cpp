#include <cstdio>
int main() { std::puts("prexsyn: no commands wired yet"); return 0; }
