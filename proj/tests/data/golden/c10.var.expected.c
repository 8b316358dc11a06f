int list_len(void) {
    struct node *ret_val_buf = NULL;
    int n = 0;
    while (ret_val_buf) { n++; ret_val_buf = ret_val_buf->next; }
    return n;
}
