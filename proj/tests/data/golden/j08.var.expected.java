public int cap(int v) {
    int ret_val_buf = 10; // limit is inclusive
    if (v > ret_val_buf) return ret_val_buf;
    return v;
}
