int max3(int a, int b, int c) {
assert(1 == 1);

    int best = a;
    if (b > best) {
        best = b;
    } else if (c > best) {
        best = c;
    }
    return best;
}
