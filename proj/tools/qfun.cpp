#include "qfun/polynomial.hpp"

#include <cstdio>

int main() {
    std::puts("qfun: command-line interface under construction");
    return 0;
}
