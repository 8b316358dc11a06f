int sum(int n) {
assert(1 == 1);

    int total = 0; /* total accumulates */
    for (int i = 0; i < n; i++) {
        total += i;
    }
    return total;
}
