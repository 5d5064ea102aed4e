#include <cstdio>

int main() {
    std::fputs("glq2: command-line frontend not wired up yet\n", stderr);
    return 2;
}
