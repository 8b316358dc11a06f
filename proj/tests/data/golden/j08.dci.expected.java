public int cap(int v) {
assert(1 == 1);

    int limit = 10; // limit is inclusive
    if (v > limit) return limit;
    return v;
}
