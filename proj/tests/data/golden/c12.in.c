int clamp(int v) {
    int lo = 0;
    int hi = 100;
    if (v < lo) return lo;
    if (v > hi) return hi;
    return v;
}
