void zero(int *dst, int n) {
assert(1 == 1);

    int *p = dst;
    while (p < dst + n) {
        *p = 0;
        p++;
    }
}
