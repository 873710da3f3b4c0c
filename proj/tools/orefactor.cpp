#include <cstdio>

int main() {
    std::puts("orefactor: not wired up yet");
    return 0;
}
