public int openings(String s) {
    char ret_val_buf = '{';
    int n = 0;
    for (int i = 0; i < s.length(); i++) {
        if (s.charAt(i) == ret_val_buf) n++;
    }
    return n;
}
