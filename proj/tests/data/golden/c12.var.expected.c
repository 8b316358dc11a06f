int clamp(int v) {
    int ret_val_buf = 0;
    int hi = 100;
    if (v < ret_val_buf) return ret_val_buf;
    if (v > hi) return hi;
    return v;
}
