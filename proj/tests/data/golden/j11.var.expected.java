public char letter(int score) {
    int ret_val_buf = score / 10;
    switch (ret_val_buf) {
    case 10: return 'A';
    case 9: return 'A';
    default: return 'B';
    }
}
